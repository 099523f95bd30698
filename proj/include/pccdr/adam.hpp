#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pccdr {

struct AdamOptions {
    double learning_rate = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam over a fixed set of parameter buffers sharing one step counter.
/// Call begin_step() once per iteration, then update() for every buffer.
class Adam {
public:
    Adam(AdamOptions options, std::span<const std::size_t> buffer_sizes);

    void begin_step() { ++step_; }
    void update(std::size_t buffer, std::span<double> params, std::span<const double> grad);

    std::size_t step() const noexcept { return step_; }

private:
    AdamOptions options_;
    std::vector<std::vector<double>> first_;
    std::vector<std::vector<double>> second_;
    std::size_t step_ = 0;
};

}  // namespace pccdr
