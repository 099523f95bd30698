#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pccdr/losses.hpp"
#include "pccdr/matrix.hpp"
#include "pccdr/random.hpp"

namespace pccdr {

/// Hyperparameters of a PCC fit. The defaults are this library's choices; none
/// of them is prescribed by the method itself.
struct PccConfig {
    std::size_t out_dim = 2;
    std::size_t k_refs = 100;  // capped at N
    double beta = 30.0;        // weight of the correlation loss
    std::vector<std::size_t> cluster_counts{4, 8, 16, 32, 64};  // empty disables the cluster term
    // Soft-rank regularization. Distances are divided by their row mean before
    // ranking, so with K refs neighboring values sit ~1/K apart; epsilon has to
    // be of that order or every row pools into a single tied block.
    double epsilon = 0.01;
    std::size_t iters = 500;
    double learning_rate = 0.05;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::size_t kmeans_max_iters = 100;
    std::size_t kmeans_n_init = 4;
    RunSeed seed{};
};

struct RefineConfig {
    double lambda = 1.0;
    std::size_t iters = 3;          // epochs
    std::size_t inner_steps = 100;  // Adam steps per epoch
    std::size_t k_refs = 100;
    double epsilon = 0.01;
    double learning_rate = 0.05;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    RunSeed seed{};
};

struct LossTraceEntry {
    std::size_t iter = 0;
    double total = 0.0;
    double corr = 0.0;
    double cluster = 0.0;
    double anchor = 0.0;
};

struct FitReport {
    nlohmann::json config;
    std::vector<LossTraceEntry> loss_trace;
    double wall_ms = 0.0;
    Embedding embedding;
};

/// i.i.d. N(0, 0.1^2) entries, deterministic per seed. Throws InvalidInput if n or m is 0.
Embedding init_random_normal(std::size_t n, std::size_t m, RunSeed seed);

/// Full-batch Adam on L = L_cluster + beta * L_correlation from a random normal
/// start. The reference set and the k-means tasks are computed once up front;
/// classifier heads start at zero and are learned jointly with the embedding.
/// One trace entry per iteration, evaluated before that iteration's step.
std::pair<Embedding, FitReport> fit_pcc(const DataMatrix& data, const PccConfig& config);

/// Starting from `init`, minimizes L = L_correlation + lambda * mean((e - init)^2)
/// for `iters` epochs of `inner_steps` Adam steps. One trace entry per epoch,
/// evaluated after the epoch's last step.
std::pair<Embedding, FitReport> refine_from_init(const DataMatrix& data, const Embedding& init,
                                                 const RefineConfig& config);

nlohmann::json to_json(const PccConfig& config);
nlohmann::json to_json(const RefineConfig& config);
/// {config, loss_trace: [{iter, total, corr, cluster, anchor}], wall_ms}
nlohmann::json to_json(const FitReport& report);

}  // namespace pccdr
