#include "pccdr/adam.hpp"

#include <cmath>

#include "pccdr/errors.hpp"
#include "pccdr/kernels.hpp"

namespace pccdr {

Adam::Adam(AdamOptions options, std::span<const std::size_t> buffer_sizes) : options_(options) {
    if (!(options_.learning_rate > 0.0)) throw InvalidInput("learning rate must be positive");
    for (std::size_t n : buffer_sizes) {
        first_.emplace_back(n, 0.0);
        second_.emplace_back(n, 0.0);
    }
}

void Adam::update(std::size_t buffer, std::span<double> params, std::span<const double> grad) {
    auto& m = first_.at(buffer);
    auto& v = second_.at(buffer);
    if (params.size() != m.size() || grad.size() != m.size()) {
        throw InvalidInput("Adam buffer size mismatch");
    }
    const double t = static_cast<double>(step_ == 0 ? 1 : step_);
    const kernels::AdamCoeffs c{
        options_.learning_rate,
        options_.beta1,
        options_.beta2,
        options_.epsilon,
        1.0 - std::pow(options_.beta1, t),
        1.0 - std::pow(options_.beta2, t),
    };
    kernels::active().adam_update(params.data(), grad.data(), m.data(), v.data(), m.size(), c);
}

}  // namespace pccdr
