#pragma once

#include <utility>
#include <vector>

#include "pccdr/matrix.hpp"

namespace pccdr {

struct PcaModel {
    std::vector<double> mean;                // d
    Matrix components;                       // m x d, orthonormal rows
    std::vector<double> explained_variance;  // m, non-increasing (sample covariance, N-1)

    Embedding transform(const Matrix& data) const;
};

/// Top-m principal directions of the centered data. Each component is signed so
/// that its largest-magnitude entry is positive. Throws InvalidInput unless
/// 1 <= m <= min(N, d).
std::pair<PcaModel, Embedding> pca_fit_transform(const Matrix& data, std::size_t m);

}  // namespace pccdr
