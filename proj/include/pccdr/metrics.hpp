#pragma once

// Embedding-quality metrics.
//
// Local metrics compare k-neighborhoods through distance ranks: rho(i, j) is
// the 1-based position of j among all other points sorted by ascending
// Euclidean distance from i, ties broken by ascending index. MRRE values are
// reported as 1 - normalized error, so for all four local metrics higher is
// better and 1 means perfect preservation.
//
// Global metrics are the Pearson and Spearman correlations between the vectors
// of pairwise distances in the input and in the embedding.

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "pccdr/matrix.hpp"
#include "pccdr/random.hpp"

namespace pccdr {

inline constexpr std::size_t kDefaultMetricK = 25;
inline constexpr std::size_t kDefaultMaxPairs = 2'000'000;

/// N x N table of neighbor ranks; rank(i, i) is 0, every other entry in [1, N-1].
class RankTable {
public:
    RankTable(std::size_t n, std::vector<std::uint32_t> ranks) : n_(n), ranks_(std::move(ranks)) {}

    std::size_t size() const noexcept { return n_; }
    std::uint32_t rank(std::size_t i, std::size_t j) const { return ranks_[i * n_ + j]; }

    friend bool operator==(const RankTable&, const RankTable&) = default;

private:
    std::size_t n_;
    std::vector<std::uint32_t> ranks_;
};

/// Throws InvalidInput when N < 2.
RankTable ranked_neighbors(const Matrix& points);

/// Throws InvalidInput unless 1 <= k < N/2 and X, Y have the same row count.
double trustworthiness(const Matrix& x, const Matrix& y, std::size_t k);
double continuity(const Matrix& x, const Matrix& y, std::size_t k);

struct MrreResult {
    double mrre_false = 0.0;    // over embedded neighborhoods, 1 - error
    double mrre_missing = 0.0;  // over original neighborhoods, 1 - error
};
MrreResult mrre(const Matrix& x, const Matrix& y, std::size_t k);

struct LocalMetrics {
    double trustworthiness = 0.0;
    double continuity = 0.0;
    double mrre_false = 0.0;
    double mrre_missing = 0.0;
};
/// All four local metrics from one pass over the rank rows.
LocalMetrics local_metrics(const Matrix& x, const Matrix& y, std::size_t k);

struct GlobalCorrelation {
    double pearson = 0.0;
    double spearman = 0.0;
    std::size_t pairs_used = 0;
    bool sampled = false;
};

/// Over all N(N-1)/2 pairs when that count is at most `max_pairs`, otherwise over
/// `max_pairs` pairs drawn uniformly without replacement. Spearman uses exact
/// fractional ranks. Throws DegenerateData if either distance vector is constant.
GlobalCorrelation global_correlation(const Matrix& x, const Matrix& y,
                                     std::size_t max_pairs = kDefaultMaxPairs,
                                     RunSeed seed = {});

struct MetricReport {
    double trustworthiness = 0.0;
    double continuity = 0.0;
    double mrre_false = 0.0;
    double mrre_missing = 0.0;
    double pearson_global = 0.0;
    double spearman_global = 0.0;
    double ls_avg = 0.0;
    double gs_avg = 0.0;
    std::size_t k_neighbors = kDefaultMetricK;
    std::size_t max_pairs = kDefaultMaxPairs;
    std::size_t pairs_used = 0;
    bool pairs_sampled = false;
    std::uint64_t seed = 0;

    friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

struct EvaluateOptions {
    std::size_t k = kDefaultMetricK;
    std::size_t max_pairs = kDefaultMaxPairs;
    RunSeed seed{};
};

MetricReport evaluate(const Matrix& x, const Matrix& y, const EvaluateOptions& options = {});

nlohmann::json to_json(const MetricReport& report);
MetricReport metric_report_from_json(const nlohmann::json& j);

}  // namespace pccdr
