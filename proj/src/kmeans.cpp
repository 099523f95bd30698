#include "pccdr/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "pccdr/errors.hpp"
#include "pccdr/kernels.hpp"
#include "pccdr/parallel.hpp"

namespace pccdr {
namespace {

std::uint32_t nearest(const Matrix& centroids, std::span<const double> point,
                      const kernels::KernelTable& kt, double* best_dist = nullptr) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = kt.squared_distance(point.data(), centroids.row(c).data(), point.size());
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(c);
        }
    }
    if (best_dist) *best_dist = best_d;
    return best;
}

Matrix plus_plus_init(const Matrix& data, std::size_t k, std::mt19937_64& rng,
                      const kernels::KernelTable& kt) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    Matrix centroids(k, d);
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());

    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    for (std::size_t c = 0; c < k; ++c) {
        std::copy_n(data.row(pick).begin(), d, centroids.row(c).begin());
        if (c + 1 == k) break;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist[i] = std::min(dist[i], kt.squared_distance(data.row(i).data(),
                                                            centroids.row(c).data(), d));
            total += dist[i];
        }
        if (total > 0.0) {
            double target = std::uniform_real_distribution<double>(0.0, total)(rng);
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                target -= dist[i];
                if (target < 0.0 && dist[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            while (dist[pick] == 0.0 && pick > 0) --pick;
        } else {
            pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        }
    }
    return centroids;
}

class LloydRun {
public:
    LloydRun(const Matrix& data, std::size_t k, Matrix centroids)
        : data_(data), k_(k), kt_(kernels::active()), centroids_(std::move(centroids)),
          assignments_(data.rows(), std::numeric_limits<std::uint32_t>::max()),
          dist_(data.rows()) {}

    // Returns true when any assignment changed.
    bool assign() {
        std::vector<char> changed(chunk_count(data_.rows()), 0);
        parallel_chunks(data_.rows(), [&](std::size_t chunk, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const std::uint32_t c = nearest(centroids_, data_.row(i), kt_, &dist_[i]);
                if (c != assignments_[i]) {
                    assignments_[i] = c;
                    changed[chunk] = 1;
                }
            }
        });
        return std::find(changed.begin(), changed.end(), 1) != changed.end();
    }

    void update() {
        const std::size_t d = data_.cols();
        Matrix sums(k_, d);
        std::vector<std::size_t> counts(k_, 0);
        for (std::size_t i = 0; i < data_.rows(); ++i) {
            const auto c = assignments_[i];
            ++counts[c];
            auto dst = sums.row(c);
            auto src = data_.row(i);
            for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
        }
        for (std::size_t c = 0; c < k_; ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t j = 0; j < d; ++j) {
                centroids_(c, j) = sums(c, j) / static_cast<double>(counts[c]);
            }
        }
        // Re-seed empty clusters with the currently worst-served points.
        std::vector<char> taken(data_.rows(), 0);
        for (std::size_t c = 0; c < k_; ++c) {
            if (counts[c] != 0) continue;
            std::size_t far = data_.rows();
            double far_d = -1.0;
            for (std::size_t i = 0; i < data_.rows(); ++i) {
                if (taken[i] || counts[assignments_[i]] <= 1) continue;
                const double di = kt_.squared_distance(
                    data_.row(i).data(), centroids_.row(assignments_[i]).data(), d);
                if (di > far_d) {
                    far_d = di;
                    far = i;
                }
            }
            if (far == data_.rows()) continue;
            taken[far] = 1;
            --counts[assignments_[far]];
            ++counts[c];
            std::copy_n(data_.row(far).begin(), d, centroids_.row(c).begin());
        }
    }

    double inertia() const {
        double s = 0.0;
        for (std::size_t i = 0; i < data_.rows(); ++i) {
            s += kt_.squared_distance(data_.row(i).data(),
                                      centroids_.row(assignments_[i]).data(), data_.cols());
        }
        return s;
    }

    ClusterResult result() const { return {k_, assignments_, centroids_, inertia()}; }

private:
    const Matrix& data_;
    std::size_t k_;
    const kernels::KernelTable& kt_;
    Matrix centroids_;
    std::vector<std::uint32_t> assignments_;
    std::vector<double> dist_;
};

void check_k(const Matrix& data, std::size_t k) {
    if (k < 1) throw InvalidInput("k-means needs k >= 1");
    if (k > data.rows()) {
        throw InvalidInput("k-means k=" + std::to_string(k) + " exceeds point count " +
                           std::to_string(data.rows()));
    }
}

}  // namespace

std::vector<double> kmeans_inertia_trace(const Matrix& data, std::size_t k, RunSeed seed,
                                         std::size_t restart, std::size_t max_iters) {
    check_k(data, k);
    auto rng = make_engine(seed, Stream::kKmeans, restart);
    LloydRun run(data, k, plus_plus_init(data, k, rng, kernels::active()));
    run.assign();
    std::vector<double> trace{run.inertia()};
    for (std::size_t it = 1; it < max_iters; ++it) {
        run.update();
        const bool changed = run.assign();
        trace.push_back(run.inertia());
        if (!changed) break;
    }
    return trace;
}

ClusterResult kmeans_fit(const Matrix& data, std::size_t k, RunSeed seed,
                         const KmeansOptions& options) {
    check_k(data, k);
    const std::size_t restarts = std::max<std::size_t>(1, options.n_init);
    const std::size_t max_iters = std::max<std::size_t>(1, options.max_iters);
    ClusterResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        auto rng = make_engine(seed, Stream::kKmeans, r);
        LloydRun run(data, k, plus_plus_init(data, k, rng, kernels::active()));
        run.assign();
        for (std::size_t it = 1; it < max_iters; ++it) {
            run.update();
            if (!run.assign()) break;
        }
        ClusterResult res = run.result();
        if (res.inertia < best.inertia) best = std::move(res);
    }
    return best;
}

std::uint32_t predict_cluster(const ClusterResult& result, std::span<const double> point) {
    if (point.size() != result.centroids.cols()) {
        throw InvalidInput("point has " + std::to_string(point.size()) +
                           " coordinates, centroids have " +
                           std::to_string(result.centroids.cols()));
    }
    return nearest(result.centroids, point, kernels::active());
}

}  // namespace pccdr
