#include "pccdr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pccdr/errors.hpp"

namespace pccdr {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw InvalidInput("matrix value count " + std::to_string(values_.size()) +
                           " does not match shape " + std::to_string(rows_) + "x" +
                           std::to_string(cols_));
    }
}

bool Matrix::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> Matrix::transposed() const {
    std::vector<double> out(values_.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out[c * rows_ + r] = values_[r * cols_ + c];
    }
    return out;
}

void validate(const DataMatrix& data) {
    if (data.rows() == 0 || data.cols() == 0) throw InvalidInput("matrix must be non-empty");
    if (!data.points.all_finite()) throw ValueError("matrix contains NaN or Inf");
    if (data.labels && data.labels->size() != data.rows()) {
        throw InvalidInput("label count does not match row count");
    }
}

}  // namespace pccdr
