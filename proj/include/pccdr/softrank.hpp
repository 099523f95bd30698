#pragma once

// Hard ranks and differentiable soft ranks.
//
// Ranks are ascending: the smallest value gets rank 1, the largest rank K.
// The soft rank of v is the Euclidean projection of v / epsilon onto the
// permutahedron spanned by the permutations of (1, ..., K). It is computed by
// sorting v and solving one isotonic regression with pool-adjacent-violators,
// so a forward pass costs O(K log K) and the vector-Jacobian product O(K).

#include <cstdint>
#include <span>
#include <vector>

namespace pccdr::softrank {

enum class RankKind { kHard, kSoft };

struct RankVector {
    std::vector<double> values;
    RankKind kind = RankKind::kHard;
    double epsilon = 0.0;  // soft ranks only
};

/// Relative tolerance under which adjacent PAV blocks are treated as tied and pooled.
inline constexpr double kBlockTieTolerance = 1e-12;

/// Ascending ranks; tied values share the average of the ranks they span.
/// Throws ValueError on non-finite input and InvalidInput on empty input.
RankVector hard_ranks(std::span<const double> v);

/// Writes ranks of `v` into `out` (same length) using `order` as scratch.
void hard_ranks_into(std::span<const double> v, std::span<double> out,
                     std::vector<std::uint32_t>& order);

/// Least-squares non-decreasing fit of v (pool-adjacent-violators).
std::vector<double> isotonic_regression(std::span<const double> v);

/// Sort permutation and pooled-block layout of one soft-rank evaluation,
/// reused by the vector-Jacobian product.
struct SoftRankPlan {
    std::vector<std::uint32_t> order;        // order[t] = index of the t-th smallest input
    std::vector<std::uint32_t> block_start;  // first sorted position of each pooled block
    double epsilon = 1.0;
};

/// Soft ranks of v into `out`, recording what the backward pass needs in `plan`.
/// A plan reused across calls on slowly changing inputs warm-starts the sort;
/// the result does not depend on the plan's prior contents.
void soft_rank_into(std::span<const double> v, double epsilon, std::span<double> out,
                    SoftRankPlan& plan);

/// upstream^T * J for the Jacobian J of the soft rank recorded in `plan`.
void soft_rank_vjp_into(const SoftRankPlan& plan, std::span<const double> upstream,
                        std::span<double> out);

/// Throws InvalidInput when epsilon <= 0 or v is empty.
RankVector soft_rank(std::span<const double> v, double epsilon);

std::vector<double> soft_rank_vjp(std::span<const double> v, double epsilon,
                                  std::span<const double> upstream);

}  // namespace pccdr::softrank
