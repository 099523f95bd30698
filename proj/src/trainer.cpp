#include "pccdr/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "pccdr/adam.hpp"
#include "pccdr/errors.hpp"
#include "pccdr/kmeans.hpp"

namespace pccdr {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_finite(double value, std::size_t iter, const char* what) {
    if (!std::isfinite(value)) {
        throw NumericalError(std::string("non-finite ") + what + " at iteration " +
                                 std::to_string(iter),
                             iter);
    }
}

void check_pcc_config(const PccConfig& c) {
    if (c.out_dim < 1) throw InvalidInput("output dimension must be >= 1");
    if (c.k_refs < 2) throw InvalidInput("reference count must be >= 2");
    if (c.beta < 0.0) throw InvalidInput("beta must be non-negative");
    if (c.iters < 1) throw InvalidInput("iteration count must be >= 1");
    if (!(c.learning_rate > 0.0)) throw InvalidInput("learning rate must be positive");
    if (!(c.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
    for (auto k : c.cluster_counts) {
        if (k < 1) throw InvalidInput("cluster counts must be >= 1");
    }
}

RunSeed task_seed(RunSeed seed, std::size_t task) {
    return RunSeed{splitmix64(seed.value ^ (0xc1u + (static_cast<std::uint64_t>(task) << 32)))};
}

}  // namespace

Embedding init_random_normal(std::size_t n, std::size_t m, RunSeed seed) {
    if (n == 0 || m == 0) throw InvalidInput("random init needs N >= 1 and m >= 1");
    auto rng = make_engine(seed, Stream::kInit);
    std::normal_distribution<double> normal(0.0, 1.0);
    Embedding emb(n, m);
    for (double& v : emb.values()) v = 0.1 * normal(rng);
    return emb;
}

std::pair<Embedding, FitReport> fit_pcc(const DataMatrix& data, const PccConfig& config) {
    const auto start = Clock::now();
    check_pcc_config(config);
    validate(data);
    const std::size_t n = data.rows();
    const std::size_t m = config.out_dim;
    const std::size_t k_refs = std::min(config.k_refs, n);
    const std::size_t max_k =
        config.cluster_counts.empty()
            ? 0
            : *std::max_element(config.cluster_counts.begin(), config.cluster_counts.end());
    if (n < std::max<std::size_t>({k_refs, max_k, 2})) {
        throw InvalidInput("need at least max(K, largest cluster count, 2) points, got " +
                           std::to_string(n));
    }

    const ReferenceSet refs = build_reference_set(data.points, k_refs, config.seed);

    std::vector<ClusterResult> tasks;
    std::vector<ClassifierHead> heads;
    for (std::size_t t = 0; t < config.cluster_counts.size(); ++t) {
        const std::size_t k = config.cluster_counts[t];
        tasks.push_back(kmeans_fit(data.points, k, task_seed(config.seed, t),
                                   {config.kmeans_max_iters, config.kmeans_n_init}));
        heads.push_back({Matrix(k, m + 1)});
    }

    Embedding emb = init_random_normal(n, m, config.seed);

    std::vector<std::size_t> sizes{emb.size()};
    for (const auto& h : heads) sizes.push_back(h.weights.size());
    Adam adam({config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_epsilon},
              sizes);

    FitReport report;
    report.config = to_json(config);
    report.config["k_refs_effective"] = k_refs;
    report.loss_trace.reserve(config.iters);

    CorrelationWorkspace workspace;
    Matrix grad(n, m);
    for (std::size_t it = 0; it < config.iters; ++it) {
        const LossValueGrad corr = correlation_loss(refs, emb, config.epsilon, &workspace);
        LossTraceEntry entry{it, 0.0, corr.value, 0.0, 0.0};
        for (std::size_t t = 0; t < grad.size(); ++t) {
            grad.values()[t] = config.beta * corr.grad_embedding.values()[t];
        }
        LossValueGrad clus;
        if (!tasks.empty()) {
            clus = cluster_loss(tasks, heads, emb);
            entry.cluster = clus.value;
            for (std::size_t t = 0; t < grad.size(); ++t) {
                grad.values()[t] += clus.grad_embedding.values()[t];
            }
        }
        entry.total = entry.cluster + config.beta * entry.corr;
        check_finite(entry.total, it, "loss");
        report.loss_trace.push_back(entry);

        adam.begin_step();
        adam.update(0, emb.values(), grad.values());
        for (std::size_t t = 0; t < heads.size(); ++t) {
            adam.update(t + 1, heads[t].weights.values(), clus.grad_heads[t].values());
        }
        if (!emb.all_finite()) {
            throw NumericalError("non-finite embedding after iteration " + std::to_string(it), it);
        }
    }

    report.embedding = emb;
    report.wall_ms = elapsed_ms(start);
    return {std::move(emb), std::move(report)};
}

std::pair<Embedding, FitReport> refine_from_init(const DataMatrix& data, const Embedding& init,
                                                 const RefineConfig& config) {
    const auto start = Clock::now();
    validate(data);
    if (init.rows() != data.rows()) {
        throw InvalidInput("initial embedding has " + std::to_string(init.rows()) +
                           " rows, data has " + std::to_string(data.rows()));
    }
    if (init.cols() < 1) throw InvalidInput("initial embedding needs at least one column");
    if (!init.all_finite()) throw ValueError("initial embedding contains NaN or Inf");
    if (config.lambda < 0.0) throw InvalidInput("lambda must be non-negative");
    if (config.iters < 1 || config.inner_steps < 1) {
        throw InvalidInput("iteration counts must be >= 1");
    }
    if (config.k_refs < 2) throw InvalidInput("reference count must be >= 2");
    if (!(config.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");

    const std::size_t n = data.rows();
    const std::size_t k_refs = std::min(config.k_refs, n);
    if (n < std::max<std::size_t>(k_refs, 2)) throw InvalidInput("need at least 2 points");
    const ReferenceSet refs = build_reference_set(data.points, k_refs, config.seed);

    Embedding emb = init;
    const std::size_t sizes[] = {emb.size()};
    Adam adam({config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_epsilon},
              sizes);

    FitReport report;
    report.config = to_json(config);
    report.config["k_refs_effective"] = k_refs;

    CorrelationWorkspace workspace;
    Matrix grad(emb.rows(), emb.cols());
    for (std::size_t epoch = 0; epoch < config.iters; ++epoch) {
        LossTraceEntry entry{epoch};
        for (std::size_t step = 0; step < config.inner_steps; ++step) {
            const std::size_t global_step = epoch * config.inner_steps + step;
            const LossValueGrad corr = correlation_loss(refs, emb, config.epsilon, &workspace);
            const LossValueGrad anchor = anchor_loss(emb, init, config.lambda);
            entry.corr = corr.value;
            entry.anchor = anchor.value;
            entry.total = corr.value + anchor.value;
            check_finite(entry.total, global_step, "loss");
            for (std::size_t t = 0; t < grad.size(); ++t) {
                grad.values()[t] = corr.grad_embedding.values()[t] + anchor.grad_embedding.values()[t];
            }
            adam.begin_step();
            adam.update(0, emb.values(), grad.values());
            if (!emb.all_finite()) {
                throw NumericalError("non-finite embedding at step " + std::to_string(global_step),
                                     global_step);
            }
        }
        const LossValueGrad corr = correlation_loss(refs, emb, config.epsilon, &workspace);
        const LossValueGrad anchor = anchor_loss(emb, init, config.lambda);
        entry.corr = corr.value;
        entry.anchor = anchor.value;
        entry.total = corr.value + anchor.value;
        check_finite(entry.total, (epoch + 1) * config.inner_steps, "loss");
        report.loss_trace.push_back(entry);
    }

    report.embedding = emb;
    report.wall_ms = elapsed_ms(start);
    return {std::move(emb), std::move(report)};
}

nlohmann::json to_json(const PccConfig& c) {
    return {
        {"mode", "fit"},
        {"out_dim", c.out_dim},
        {"k_refs", c.k_refs},
        {"beta", c.beta},
        {"cluster_counts", c.cluster_counts},
        {"epsilon", c.epsilon},
        {"iters", c.iters},
        {"learning_rate", c.learning_rate},
        {"optimizer", {{"name", "adam"}, {"beta1", c.adam_beta1}, {"beta2", c.adam_beta2},
                       {"eps", c.adam_epsilon}}},
        {"kmeans", {{"max_iters", c.kmeans_max_iters}, {"n_init", c.kmeans_n_init}}},
        {"seed", c.seed.value},
    };
}

nlohmann::json to_json(const RefineConfig& c) {
    return {
        {"mode", "refine"},
        {"lambda", c.lambda},
        {"iters", c.iters},
        {"inner_steps", c.inner_steps},
        {"k_refs", c.k_refs},
        {"epsilon", c.epsilon},
        {"learning_rate", c.learning_rate},
        {"optimizer", {{"name", "adam"}, {"beta1", c.adam_beta1}, {"beta2", c.adam_beta2},
                       {"eps", c.adam_epsilon}}},
        {"seed", c.seed.value},
    };
}

nlohmann::json to_json(const FitReport& report) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& e : report.loss_trace) {
        trace.push_back({{"iter", e.iter},
                         {"total", e.total},
                         {"corr", e.corr},
                         {"cluster", e.cluster},
                         {"anchor", e.anchor}});
    }
    return {{"config", report.config}, {"loss_trace", std::move(trace)}, {"wall_ms", report.wall_ms}};
}

}  // namespace pccdr
