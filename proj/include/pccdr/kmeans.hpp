#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pccdr/matrix.hpp"
#include "pccdr/random.hpp"

namespace pccdr {

struct ClusterResult {
    std::size_t k = 0;
    std::vector<std::uint32_t> assignments;  // per point, in [0, k)
    Matrix centroids;                        // k x d
    double inertia = 0.0;                    // sum of squared distances to assigned centroids
};

struct KmeansOptions {
    std::size_t max_iters = 100;
    std::size_t n_init = 4;
};

/// Lloyd's algorithm with k-means++ seeding, best of `n_init` restarts.
///
/// Iterates until assignments stop changing or `max_iters` is reached, always
/// finishing on an assignment step so every point sits with its nearest
/// centroid (ties go to the lowest id). A cluster that empties out is
/// re-seeded with the point farthest from its current centroid.
ClusterResult kmeans_fit(const Matrix& data, std::size_t k, RunSeed seed,
                         const KmeansOptions& options = {});

/// Per-iteration inertia of one restart; exposed for monotonicity tests.
std::vector<double> kmeans_inertia_trace(const Matrix& data, std::size_t k, RunSeed seed,
                                         std::size_t restart, std::size_t max_iters);

std::uint32_t predict_cluster(const ClusterResult& result, std::span<const double> point);

}  // namespace pccdr
