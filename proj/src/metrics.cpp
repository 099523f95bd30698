#include "pccdr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "pccdr/errors.hpp"
#include "pccdr/kernels.hpp"
#include "pccdr/parallel.hpp"
#include "pccdr/softrank.hpp"

namespace pccdr {
namespace {

// Computes rank rows one point at a time; keeps memory at O(N) per worker.
class RankRows {
public:
    explicit RankRows(const Matrix& points)
        : points_(points), soa_(points.transposed()), kt_(kernels::active()) {}

    void fill(std::size_t i, std::vector<double>& dist, std::vector<std::uint32_t>& order,
              std::vector<std::uint32_t>& ranks) const {
        const std::size_t n = points_.rows();
        dist.resize(n);
        order.resize(n);
        ranks.resize(n);
        kt_.distances_soa(points_.row(i).data(), points_.cols(), soa_.data(), n, n, dist.data());
        // Self first, then ascending (distance, index).
        keyed_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            keyed_[j] = {j == i ? -1.0 : dist[j], static_cast<std::uint32_t>(j)};
        }
        std::sort(keyed_.begin(), keyed_.end());
        for (std::size_t r = 0; r < n; ++r) order[r] = keyed_[r].second;
        for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<std::uint32_t>(r);
    }

private:
    const Matrix& points_;
    std::vector<double> soa_;
    const kernels::KernelTable& kt_;
    static thread_local std::vector<std::pair<double, std::uint32_t>> keyed_;
};

thread_local std::vector<std::pair<double, std::uint32_t>> RankRows::keyed_;

void check_pair(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows()) {
        throw InvalidInput("row count mismatch: " + std::to_string(x.rows()) + " vs " +
                           std::to_string(y.rows()));
    }
    if (x.cols() == 0 || y.cols() == 0) throw InvalidInput("matrices need at least one column");
}

void check_k(std::size_t n, std::size_t k) {
    if (k < 1 || 2 * k >= n) {
        throw InvalidInput("neighborhood size k=" + std::to_string(k) +
                           " must satisfy 1 <= k < N/2 (N=" + std::to_string(n) + ")");
    }
}

struct LocalSums {
    double trust = 0.0;
    double cont = 0.0;
    double mrre_false = 0.0;
    double mrre_missing = 0.0;
};

double pearson_of(std::span<const double> a, std::span<const double> b) {
    const auto& kt = kernels::active();
    const double n = static_cast<double>(a.size());
    const double ma = kt.sum(a.data(), a.size()) / n;
    const double mb = kt.sum(b.data(), b.size()) / n;
    const auto m = kt.centered_moments(a.data(), b.data(), a.size(), ma, mb);
    return m.sxy / std::sqrt(m.sxx * m.syy);
}

std::pair<std::size_t, std::size_t> decode_pair(std::uint64_t p, std::size_t n) {
    // Row i holds pairs (i, i+1..n-1); its first linear index is i*(2n-i-1)/2.
    auto first = [n](std::uint64_t i) { return i * (2 * n - i - 1) / 2; };
    const double nn = static_cast<double>(n);
    auto i = static_cast<std::uint64_t>(
        std::floor(nn - 0.5 - std::sqrt((nn - 0.5) * (nn - 0.5) - 2.0 * static_cast<double>(p))));
    while (i > 0 && first(i) > p) --i;
    while (i + 1 < n && first(i + 1) <= p) ++i;
    return {static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1 + (p - first(i)))};
}

}  // namespace

RankTable ranked_neighbors(const Matrix& points) {
    const std::size_t n = points.rows();
    if (n < 2) throw InvalidInput("rank table needs N >= 2");
    std::vector<std::uint32_t> table(n * n);
    RankRows rows(points);
    parallel_chunks(n, [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<double> dist;
        std::vector<std::uint32_t> order;
        std::vector<std::uint32_t> ranks;
        for (std::size_t i = b; i < e; ++i) {
            rows.fill(i, dist, order, ranks);
            std::copy(ranks.begin(), ranks.end(), table.begin() + static_cast<std::ptrdiff_t>(i * n));
        }
    });
    return RankTable(n, std::move(table));
}

LocalMetrics local_metrics(const Matrix& x, const Matrix& y, std::size_t k) {
    check_pair(x, y);
    const std::size_t n = x.rows();
    check_k(n, k);
    RankRows rows_x(x);
    RankRows rows_y(y);

    std::vector<LocalSums> partial(chunk_count(n));
    parallel_chunks(n, [&](std::size_t chunk, std::size_t b, std::size_t e) {
        std::vector<double> dist;
        std::vector<std::uint32_t> order_x, order_y, rank_x, rank_y;
        LocalSums& s = partial[chunk];
        for (std::size_t i = b; i < e; ++i) {
            rows_x.fill(i, dist, order_x, rank_x);
            rows_y.fill(i, dist, order_y, rank_y);
            // order[1..k] are the k nearest neighbors (order[0] is i itself).
            for (std::size_t r = 1; r <= k; ++r) {
                const std::uint32_t j = order_y[r];
                const double rx = rank_x[j];
                const double ry = rank_y[j];
                if (rx > static_cast<double>(k)) s.trust += rx - static_cast<double>(k);
                s.mrre_false += std::fabs(rx - ry) / ry;
            }
            for (std::size_t r = 1; r <= k; ++r) {
                const std::uint32_t j = order_x[r];
                const double rx = rank_x[j];
                const double ry = rank_y[j];
                if (ry > static_cast<double>(k)) s.cont += ry - static_cast<double>(k);
                s.mrre_missing += std::fabs(ry - rx) / rx;
            }
        }
    });
    LocalSums total;
    for (const auto& s : partial) {
        total.trust += s.trust;
        total.cont += s.cont;
        total.mrre_false += s.mrre_false;
        total.mrre_missing += s.mrre_missing;
    }

    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    const double tc_norm = 2.0 / (nd * kd * (2.0 * nd - 3.0 * kd - 1.0));
    double mrre_norm = 0.0;
    for (std::size_t l = 1; l <= k; ++l) {
        mrre_norm += std::fabs(nd - 2.0 * static_cast<double>(l) + 1.0) / static_cast<double>(l);
    }
    mrre_norm *= nd;

    return {1.0 - tc_norm * total.trust, 1.0 - tc_norm * total.cont,
            1.0 - total.mrre_false / mrre_norm, 1.0 - total.mrre_missing / mrre_norm};
}

double trustworthiness(const Matrix& x, const Matrix& y, std::size_t k) {
    return local_metrics(x, y, k).trustworthiness;
}

double continuity(const Matrix& x, const Matrix& y, std::size_t k) {
    return local_metrics(x, y, k).continuity;
}

MrreResult mrre(const Matrix& x, const Matrix& y, std::size_t k) {
    const auto l = local_metrics(x, y, k);
    return {l.mrre_false, l.mrre_missing};
}

GlobalCorrelation global_correlation(const Matrix& x, const Matrix& y, std::size_t max_pairs,
                                     RunSeed seed) {
    check_pair(x, y);
    const std::size_t n = x.rows();
    if (n < 3) throw InvalidInput("global correlation needs N >= 3");
    if (max_pairs < 2) throw InvalidInput("max_pairs must be >= 2");
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;

    GlobalCorrelation out;
    std::vector<double> dx;
    std::vector<double> dy;
    const auto& kt = kernels::active();
    if (total <= max_pairs) {
        dx.resize(total);
        dy.resize(total);
        parallel_for(n - 1, [&](std::size_t i) {
            const std::size_t base = i * (2 * n - i - 1) / 2;
            for (std::size_t j = i + 1; j < n; ++j) {
                dx[base + j - i - 1] =
                    std::sqrt(kt.squared_distance(x.row(i).data(), x.row(j).data(), x.cols()));
                dy[base + j - i - 1] =
                    std::sqrt(kt.squared_distance(y.row(i).data(), y.row(j).data(), y.cols()));
            }
        });
    } else {
        // Floyd's sampling of max_pairs distinct linear pair indices.
        auto rng = make_engine(seed, Stream::kPairSampling);
        std::unordered_set<std::uint64_t> chosen;
        chosen.reserve(max_pairs * 2);
        for (std::uint64_t j = total - max_pairs; j < total; ++j) {
            const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        std::vector<std::uint64_t> picks(chosen.begin(), chosen.end());
        std::sort(picks.begin(), picks.end());
        dx.resize(picks.size());
        dy.resize(picks.size());
        parallel_for(picks.size(), [&](std::size_t t) {
            const auto [i, j] = decode_pair(picks[t], n);
            dx[t] = std::sqrt(kt.squared_distance(x.row(i).data(), x.row(j).data(), x.cols()));
            dy[t] = std::sqrt(kt.squared_distance(y.row(i).data(), y.row(j).data(), y.cols()));
        });
        out.sampled = true;
    }
    out.pairs_used = dx.size();

    for (const auto* v : {&dx, &dy}) {
        const auto [lo, hi] = std::minmax_element(v->begin(), v->end());
        if (*lo == *hi) throw DegenerateData("pairwise distances are all equal");
    }
    out.pearson = pearson_of(dx, dy);
    const auto rx = softrank::hard_ranks(dx);
    const auto ry = softrank::hard_ranks(dy);
    out.spearman = pearson_of(rx.values, ry.values);
    return out;
}

MetricReport evaluate(const Matrix& x, const Matrix& y, const EvaluateOptions& options) {
    const LocalMetrics local = local_metrics(x, y, options.k);
    const GlobalCorrelation global = global_correlation(x, y, options.max_pairs, options.seed);
    MetricReport r;
    r.trustworthiness = local.trustworthiness;
    r.continuity = local.continuity;
    r.mrre_false = local.mrre_false;
    r.mrre_missing = local.mrre_missing;
    r.pearson_global = global.pearson;
    r.spearman_global = global.spearman;
    r.ls_avg = (r.trustworthiness + r.continuity + r.mrre_false + r.mrre_missing) / 4.0;
    r.gs_avg = (r.pearson_global + r.spearman_global) / 2.0;
    r.k_neighbors = options.k;
    r.max_pairs = options.max_pairs;
    r.pairs_used = global.pairs_used;
    r.pairs_sampled = global.sampled;
    r.seed = options.seed.value;
    return r;
}

nlohmann::json to_json(const MetricReport& r) {
    return {
        {"trustworthiness", r.trustworthiness},
        {"continuity", r.continuity},
        {"mrre_false", r.mrre_false},
        {"mrre_missing", r.mrre_missing},
        {"pearson_global", r.pearson_global},
        {"spearman_global", r.spearman_global},
        {"ls_avg", r.ls_avg},
        {"gs_avg", r.gs_avg},
        {"k_neighbors", r.k_neighbors},
        {"max_pairs", r.max_pairs},
        {"pairs_used", r.pairs_used},
        {"pairs_sampled", r.pairs_sampled},
        {"seed", r.seed},
    };
}

MetricReport metric_report_from_json(const nlohmann::json& j) {
    MetricReport r;
    j.at("trustworthiness").get_to(r.trustworthiness);
    j.at("continuity").get_to(r.continuity);
    j.at("mrre_false").get_to(r.mrre_false);
    j.at("mrre_missing").get_to(r.mrre_missing);
    j.at("pearson_global").get_to(r.pearson_global);
    j.at("spearman_global").get_to(r.spearman_global);
    j.at("ls_avg").get_to(r.ls_avg);
    j.at("gs_avg").get_to(r.gs_avg);
    j.at("k_neighbors").get_to(r.k_neighbors);
    j.at("max_pairs").get_to(r.max_pairs);
    j.at("pairs_used").get_to(r.pairs_used);
    j.at("pairs_sampled").get_to(r.pairs_sampled);
    j.at("seed").get_to(r.seed);
    return r;
}

}  // namespace pccdr
