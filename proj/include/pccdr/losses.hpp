#pragma once

// Objectives and their analytic gradients.
//
// The global correlation objective compares, for every point i and every
// reference point I_j, the input-space distance dx_ij with the embedding
// distance dy_ij. The Pearson term correlates the raw distances, the Spearman
// term correlates the hard ranks of dx (row-wise) with soft ranks of dy. Both
// statistics are taken over all N*K entries at once.

#include <cstdint>
#include <span>
#include <vector>

#include "pccdr/kmeans.hpp"
#include "pccdr/matrix.hpp"
#include "pccdr/random.hpp"
#include "pccdr/softrank.hpp"

namespace pccdr {

/// Only Euclidean distances are implemented.
enum class DistanceMetric { kEuclidean };

struct ReferenceSet {
    std::vector<std::uint32_t> indices;  // K sampled point indices
    Matrix dx;                           // N x K input-space distances
    Matrix rx;                           // N x K row-wise hard ranks of dx

    std::size_t count() const noexcept { return indices.size(); }
};

/// Samples K indices uniformly without replacement and precomputes dx and rx.
/// Throws InvalidInput for K outside [1, N] and DegenerateData when every
/// distance is equal.
ReferenceSet build_reference_set(const Matrix& data, std::size_t k, RunSeed seed,
                                 DistanceMetric metric = DistanceMetric::kEuclidean);

/// Same, with caller-chosen reference indices.
ReferenceSet reference_set_from_indices(const Matrix& data, std::vector<std::uint32_t> indices);

/// Linear classifier for one clustering task: k x (m + 1), last column is the bias.
struct ClassifierHead {
    Matrix weights;
};

struct LossValueGrad {
    double value = 0.0;
    Matrix grad_embedding;
    std::vector<Matrix> grad_heads;  // cluster loss only
    bool degenerate = false;
};

/// Value plus gradient with respect to a flat vector of inputs.
struct FlatLossGrad {
    double value = 0.0;
    std::vector<double> grad;
    bool degenerate = false;
};

/// Per-row soft-rank plans kept between evaluations on the same reference set,
/// so successive optimizer steps can warm-start their sorts.
struct CorrelationWorkspace {
    std::vector<softrank::SoftRankPlan> plans;
};

/// Negative Pearson correlation of dx and dy with its gradient in dy.
/// A constant dy yields value 0, zero gradient and `degenerate`; a constant dx
/// throws DegenerateData.
FlatLossGrad pearson_loss(std::span<const double> dx, std::span<const double> dy);

/// Negative correlation between hard ranks rx and row-wise soft ranks of dy
/// (each row divided by its mean when that mean is positive), gradient in dy.
FlatLossGrad spearman_loss(const Matrix& rx, const Matrix& dy, double epsilon,
                           CorrelationWorkspace* workspace = nullptr);

/// N x K embedding distances to the reference points.
Matrix embedding_distances(const ReferenceSet& refs, const Embedding& emb);

/// Chain rule from a gradient in dy to a gradient in the embedding. Entries with
/// dy == 0 contribute nothing.
Matrix distance_backprop(const ReferenceSet& refs, const Embedding& emb, const Matrix& dy,
                         std::span<const double> grad_dy);

LossValueGrad pearson_embedding_loss(const ReferenceSet& refs, const Embedding& emb);
LossValueGrad spearman_embedding_loss(const ReferenceSet& refs, const Embedding& emb,
                                      double epsilon);

/// 0.5 * Pearson + 0.5 * Spearman, both through the embedding.
LossValueGrad correlation_loss(const ReferenceSet& refs, const Embedding& emb, double epsilon,
                               CorrelationWorkspace* workspace = nullptr);

/// Mean over tasks of the mean softmax cross-entropy of each head against its
/// k-means assignments. Returns gradients for the embedding and every head.
LossValueGrad cluster_loss(std::span<const ClusterResult> tasks,
                           std::span<const ClassifierHead> heads, const Embedding& emb);

/// lambda * mean squared deviation of emb from init.
LossValueGrad anchor_loss(const Embedding& emb, const Embedding& init, double lambda);

}  // namespace pccdr
