#include "pccdr/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "pccdr/errors.hpp"
#include "pccdr/kernels.hpp"
#include "pccdr/parallel.hpp"
#include "pccdr/softrank.hpp"

namespace pccdr {
namespace {

std::vector<double> gather_soa(const Matrix& points, std::span<const std::uint32_t> indices) {
    const std::size_t k = indices.size();
    std::vector<double> soa(points.cols() * k);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t c = 0; c < points.cols(); ++c) soa[c * k + j] = points(indices[j], c);
    }
    return soa;
}

Matrix distances_to(const Matrix& points, std::span<const std::uint32_t> indices) {
    const std::size_t k = indices.size();
    const auto soa = gather_soa(points, indices);
    const auto& kt = kernels::active();
    Matrix out(points.rows(), k);
    parallel_for(points.rows(), [&](std::size_t i) {
        kt.distances_soa(points.row(i).data(), points.cols(), soa.data(), k, k,
                         out.row(i).data());
    });
    return out;
}

struct CorrelationStats {
    double value = 0.0;
    double inv_norm = 0.0;  // 1 / sqrt(sxx * syy)
    double ratio = 0.0;     // sxy / syy
    double mx = 0.0;
    double my = 0.0;
    bool degenerate = false;
};

CorrelationStats correlate(std::span<const double> x, std::span<const double> y) {
    const auto& kt = kernels::active();
    const double n = static_cast<double>(x.size());
    CorrelationStats s;
    s.mx = kt.sum(x.data(), x.size()) / n;
    s.my = kt.sum(y.data(), y.size()) / n;
    const auto m = kt.centered_moments(x.data(), y.data(), x.size(), s.mx, s.my);
    if (!(m.sxx > 0.0) || !(m.syy > 0.0)) {
        s.degenerate = true;
        return s;
    }
    s.inv_norm = 1.0 / std::sqrt(m.sxx * m.syy);
    s.ratio = m.sxy / m.syy;
    s.value = -m.sxy * s.inv_norm;
    return s;
}

// d(-corr)/dy_t = -inv_norm * ((x_t - mx) - ratio * (y_t - my))
void correlation_grad(const CorrelationStats& s, std::span<const double> x,
                      std::span<const double> y, std::span<double> grad) {
    for (std::size_t t = 0; t < x.size(); ++t) {
        grad[t] = -s.inv_norm * ((x[t] - s.mx) - s.ratio * (y[t] - s.my));
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                           "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                           "x" + std::to_string(b.cols()));
    }
}

LossValueGrad embed(const ReferenceSet& refs, const Embedding& emb, const Matrix& dy,
                    const FlatLossGrad& flat) {
    LossValueGrad out;
    out.value = flat.value;
    out.degenerate = flat.degenerate;
    out.grad_embedding = flat.degenerate ? Matrix(emb.rows(), emb.cols())
                                         : distance_backprop(refs, emb, dy, flat.grad);
    return out;
}

void require_embedding_rows(const ReferenceSet& refs, const Embedding& emb) {
    if (emb.rows() != refs.dx.rows()) {
        throw InvalidInput("embedding has " + std::to_string(emb.rows()) +
                           " rows, reference set expects " + std::to_string(refs.dx.rows()));
    }
    if (emb.cols() == 0) throw InvalidInput("embedding must have at least one column");
}

}  // namespace

ReferenceSet reference_set_from_indices(const Matrix& data, std::vector<std::uint32_t> indices) {
    if (indices.empty()) throw InvalidInput("reference set needs K >= 1");
    for (auto idx : indices) {
        if (idx >= data.rows()) throw InvalidInput("reference index out of range");
    }
    ReferenceSet refs;
    refs.indices = std::move(indices);
    refs.dx = distances_to(data, refs.indices);

    const auto [lo, hi] = std::minmax_element(refs.dx.values().begin(), refs.dx.values().end());
    if (*lo == *hi) throw DegenerateData("all reference distances are equal");

    const std::size_t k = refs.count();
    refs.rx = Matrix(data.rows(), k);
    parallel_chunks(data.rows(), [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<std::uint32_t> order;
        for (std::size_t i = b; i < e; ++i) softrank::hard_ranks_into(refs.dx.row(i), refs.rx.row(i), order);
    });
    return refs;
}

ReferenceSet build_reference_set(const Matrix& data, std::size_t k, RunSeed seed,
                                 DistanceMetric /*metric*/) {
    const std::size_t n = data.rows();
    if (k < 1 || k > n) {
        throw InvalidInput("reference count K=" + std::to_string(k) + " must lie in [1, " +
                           std::to_string(n) + "]");
    }
    auto rng = make_engine(seed, Stream::kReferenceSampling);
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t pick = std::uniform_int_distribution<std::size_t>(j, n - 1)(rng);
        std::swap(pool[j], pool[pick]);
    }
    pool.resize(k);
    return reference_set_from_indices(data, std::move(pool));
}

FlatLossGrad pearson_loss(std::span<const double> dx, std::span<const double> dy) {
    if (dx.size() != dy.size()) throw InvalidInput("pearson_loss: length mismatch");
    if (dx.size() < 2) throw InvalidInput("pearson_loss needs at least 2 entries");
    FlatLossGrad out;
    out.grad.assign(dx.size(), 0.0);
    const auto stats = correlate(dx, dy);
    if (stats.degenerate) {
        const auto [lo, hi] = std::minmax_element(dx.begin(), dx.end());
        if (*lo == *hi) throw DegenerateData("pearson_loss: dx has zero variance");
        out.degenerate = true;
        return out;
    }
    out.value = stats.value;
    correlation_grad(stats, dx, dy, out.grad);
    return out;
}

FlatLossGrad spearman_loss(const Matrix& rx, const Matrix& dy, double epsilon,
                           CorrelationWorkspace* workspace) {
    require_same_shape(rx, dy, "spearman_loss");
    if (!(epsilon > 0.0)) throw InvalidInput("spearman_loss: epsilon must be positive");
    const std::size_t n = dy.rows();
    const std::size_t k = dy.cols();

    Matrix ry(n, k);
    CorrelationWorkspace local;
    auto& plans = (workspace ? workspace : &local)->plans;
    plans.resize(n);
    std::vector<double> row_mean(n, 0.0);
    parallel_chunks(n, [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<double> z(k);
        for (std::size_t i = b; i < e; ++i) {
            const auto row = dy.row(i);
            double mean = 0.0;
            for (double v : row) mean += v;
            mean /= static_cast<double>(k);
            row_mean[i] = mean;
            const double scale = mean > 0.0 ? 1.0 / mean : 1.0;
            for (std::size_t j = 0; j < k; ++j) z[j] = row[j] * scale;
            softrank::soft_rank_into(z, epsilon, ry.row(i), plans[i]);
        }
    });

    FlatLossGrad out;
    out.grad.assign(n * k, 0.0);
    const auto stats = correlate(rx.values(), ry.values());
    if (stats.degenerate) {
        out.degenerate = true;
        return out;
    }
    out.value = stats.value;

    std::vector<double> grad_ry(n * k);
    correlation_grad(stats, rx.values(), ry.values(), grad_ry);

    parallel_chunks(n, [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<double> grad_z(k);
        for (std::size_t i = b; i < e; ++i) {
            softrank::soft_rank_vjp_into(plans[i], std::span(grad_ry).subspan(i * k, k), grad_z);
            auto g = std::span(out.grad).subspan(i * k, k);
            const double mean = row_mean[i];
            if (mean > 0.0) {
                // z_j = dy_j / mean(dy): dz_j/ddy_l = delta_jl / mean - dy_j / (K mean^2)
                const auto row = dy.row(i);
                double dot = 0.0;
                for (std::size_t j = 0; j < k; ++j) dot += grad_z[j] * row[j];
                const double shared = dot / (static_cast<double>(k) * mean * mean);
                for (std::size_t j = 0; j < k; ++j) g[j] = grad_z[j] / mean - shared;
            } else {
                std::copy(grad_z.begin(), grad_z.end(), g.begin());
            }
        }
    });
    return out;
}

Matrix embedding_distances(const ReferenceSet& refs, const Embedding& emb) {
    require_embedding_rows(refs, emb);
    return distances_to(emb, refs.indices);
}

Matrix distance_backprop(const ReferenceSet& refs, const Embedding& emb, const Matrix& dy,
                         std::span<const double> grad_dy) {
    const std::size_t n = emb.rows();
    const std::size_t m = emb.cols();
    const std::size_t k = refs.count();
    Matrix grad(n, m);

    // Row contributions land in the chunk's own rows; reference contributions go
    // to per-chunk buffers merged afterwards in chunk order.
    const std::size_t chunks = chunk_count(n);
    std::vector<Matrix> ref_parts(chunks, Matrix(k, m));
    parallel_chunks(n, [&](std::size_t chunk, std::size_t b, std::size_t e) {
        Matrix& part = ref_parts[chunk];
        for (std::size_t i = b; i < e; ++i) {
            const auto yi = emb.row(i);
            auto gi = grad.row(i);
            for (std::size_t j = 0; j < k; ++j) {
                const double d = dy(i, j);
                if (d <= 0.0) continue;
                const double coef = grad_dy[i * k + j] / d;
                const auto yr = emb.row(refs.indices[j]);
                auto gr = part.row(j);
                for (std::size_t c = 0; c < m; ++c) {
                    const double v = coef * (yi[c] - yr[c]);
                    gi[c] += v;
                    gr[c] -= v;
                }
            }
        }
    });
    for (const Matrix& part : ref_parts) {
        for (std::size_t j = 0; j < k; ++j) {
            auto dst = grad.row(refs.indices[j]);
            const auto src = part.row(j);
            for (std::size_t c = 0; c < m; ++c) dst[c] += src[c];
        }
    }
    return grad;
}

LossValueGrad pearson_embedding_loss(const ReferenceSet& refs, const Embedding& emb) {
    const Matrix dy = embedding_distances(refs, emb);
    return embed(refs, emb, dy, pearson_loss(refs.dx.values(), dy.values()));
}

LossValueGrad spearman_embedding_loss(const ReferenceSet& refs, const Embedding& emb,
                                      double epsilon) {
    const Matrix dy = embedding_distances(refs, emb);
    return embed(refs, emb, dy, spearman_loss(refs.rx, dy, epsilon));
}

LossValueGrad correlation_loss(const ReferenceSet& refs, const Embedding& emb, double epsilon,
                               CorrelationWorkspace* workspace) {
    const Matrix dy = embedding_distances(refs, emb);
    const FlatLossGrad p = pearson_loss(refs.dx.values(), dy.values());
    const FlatLossGrad s = spearman_loss(refs.rx, dy, epsilon, workspace);

    LossValueGrad out;
    out.value = 0.5 * p.value + 0.5 * s.value;
    out.degenerate = p.degenerate || s.degenerate;
    std::vector<double> grad_dy(dy.size());
    for (std::size_t t = 0; t < grad_dy.size(); ++t) grad_dy[t] = 0.5 * p.grad[t] + 0.5 * s.grad[t];
    out.grad_embedding = distance_backprop(refs, emb, dy, grad_dy);
    return out;
}

LossValueGrad cluster_loss(std::span<const ClusterResult> tasks,
                           std::span<const ClassifierHead> heads, const Embedding& emb) {
    if (tasks.empty()) throw InvalidInput("cluster_loss needs at least one task");
    if (tasks.size() != heads.size()) throw InvalidInput("cluster_loss: task/head count mismatch");
    const std::size_t n = emb.rows();
    const std::size_t m = emb.cols();
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(tasks.size()));

    LossValueGrad out;
    out.grad_embedding = Matrix(n, m);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const ClusterResult& task = tasks[t];
        const Matrix& w = heads[t].weights;
        if (w.rows() != task.k || w.cols() != m + 1) {
            throw InvalidInput("classifier head " + std::to_string(t) + " must be " +
                               std::to_string(task.k) + "x" + std::to_string(m + 1));
        }
        if (task.assignments.size() != n) {
            throw InvalidInput("cluster task " + std::to_string(t) + " has wrong point count");
        }
        const std::size_t k = task.k;
        Matrix grad_w(k, m + 1);
        std::vector<double> logits(k);
        std::vector<double> probs(k);
        double task_loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto e = emb.row(i);
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                double z = w(c, m);
                for (std::size_t a = 0; a < m; ++a) z += w(c, a) * e[a];
                logits[c] = z;
                top = std::max(top, z);
            }
            double denom = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                probs[c] = std::exp(logits[c] - top);
                denom += probs[c];
            }
            const std::uint32_t target = task.assignments[i];
            task_loss += top + std::log(denom) - logits[target];

            auto ge = out.grad_embedding.row(i);
            for (std::size_t c = 0; c < k; ++c) {
                const double p = probs[c] / denom;
                const double g = (p - (c == target ? 1.0 : 0.0)) * scale;
                for (std::size_t a = 0; a < m; ++a) {
                    grad_w(c, a) += g * e[a];
                    ge[a] += g * w(c, a);
                }
                grad_w(c, m) += g;
            }
        }
        out.value += task_loss * scale;
        out.grad_heads.push_back(std::move(grad_w));
    }
    return out;
}

LossValueGrad anchor_loss(const Embedding& emb, const Embedding& init, double lambda) {
    require_same_shape(emb, init, "anchor_loss");
    if (lambda < 0.0) throw InvalidInput("anchor_loss: lambda must be non-negative");
    LossValueGrad out;
    out.grad_embedding = Matrix(emb.rows(), emb.cols());
    const double count = static_cast<double>(emb.size());
    double sq = 0.0;
    for (std::size_t t = 0; t < emb.size(); ++t) {
        const double d = emb.values()[t] - init.values()[t];
        sq += d * d;
        out.grad_embedding.values()[t] = 2.0 * lambda * d / count;
    }
    out.value = lambda * sq / count;
    return out;
}

}  // namespace pccdr
