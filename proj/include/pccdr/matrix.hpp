#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pccdr {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    bool all_finite() const;

    /// Column-major copy (cols x rows), i.e. one contiguous lane per coordinate.
    std::vector<double> transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Learned low-dimensional coordinates, one row per point.
using Embedding = Matrix;

/// Input points plus optional per-row class ids. Labels are carried for plotting only.
struct DataMatrix {
    Matrix points;
    std::optional<std::vector<std::int64_t>> labels;

    std::size_t rows() const noexcept { return points.rows(); }
    std::size_t cols() const noexcept { return points.cols(); }
};

/// Throws ValueError if any entry is NaN/Inf and InvalidInput on a label length mismatch.
void validate(const DataMatrix& data);

}  // namespace pccdr
