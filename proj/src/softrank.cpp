#include "pccdr/softrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "pccdr/errors.hpp"

namespace pccdr::softrank {
namespace {

struct Block {
    double sum;
    double count;
    std::uint32_t start;

    double mean() const { return sum / count; }
};

bool tied_or_violating(const Block& left, const Block& right) {
    const double a = left.mean();
    const double b = right.mean();
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return a >= b - kBlockTieTolerance * scale;
}

// Non-decreasing PAV over `a`. Fills `out` with the fit and `starts` with the
// first index of each pooled block.
void pav(std::span<const double> a, std::span<double> out, std::vector<std::uint32_t>& starts) {
    thread_local std::vector<Block> stack;
    stack.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
        stack.push_back({a[i], 1.0, static_cast<std::uint32_t>(i)});
        while (stack.size() >= 2 && tied_or_violating(stack[stack.size() - 2], stack.back())) {
            const Block top = stack.back();
            stack.pop_back();
            stack.back().sum += top.sum;
            stack.back().count += top.count;
        }
    }
    starts.clear();
    for (std::size_t b = 0; b < stack.size(); ++b) {
        starts.push_back(stack[b].start);
        const std::size_t end = b + 1 < stack.size() ? stack[b + 1].start : a.size();
        const double m = stack[b].mean();
        for (std::size_t i = stack[b].start; i < end; ++i) out[i] = m;
    }
}

void require_finite(std::span<const double> v) {
    if (v.empty()) throw InvalidInput("rank input must be non-empty");
    for (double x : v) {
        if (!std::isfinite(x)) throw ValueError("rank input contains NaN or Inf");
    }
}

void argsort(std::span<const double> v, std::vector<std::uint32_t>& order) {
    // Sorting (value, index) pairs is faster than an indirect sort and yields
    // the same order: ascending value, ties by ascending index.
    thread_local std::vector<std::pair<double, std::uint32_t>> keyed;
    keyed.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) keyed[i] = {v[i], static_cast<std::uint32_t>(i)};
    std::sort(keyed.begin(), keyed.end());
    order.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = keyed[i].second;
}

// Re-sorts a permutation left over from a previous call with insertion sort.
// Gives up (returns false) once the work exceeds a small multiple of K.
bool resort(std::span<const double> v, std::vector<std::uint32_t>& order) {
    const std::size_t k = v.size();
    const std::size_t budget = 8 * k;
    std::size_t moves = 0;
    auto less = [&](std::uint32_t a, std::uint32_t b) {
        return v[a] < v[b] || (v[a] == v[b] && a < b);
    };
    for (std::size_t t = 1; t < k; ++t) {
        const std::uint32_t cur = order[t];
        std::size_t s = t;
        while (s > 0 && less(cur, order[s - 1])) {
            order[s] = order[s - 1];
            --s;
            if (++moves > budget) {
                order[s] = cur;
                return false;
            }
        }
        order[s] = cur;
    }
    return true;
}

}  // namespace

void hard_ranks_into(std::span<const double> v, std::span<double> out,
                     std::vector<std::uint32_t>& order) {
    argsort(v, order);
    const std::size_t k = v.size();
    std::size_t t = 0;
    while (t < k) {
        std::size_t end = t + 1;
        while (end < k && v[order[end]] == v[order[t]]) ++end;
        // Positions t..end-1 hold ranks t+1..end; ties share their average.
        const double rank = 0.5 * static_cast<double>(t + 1 + end);
        for (std::size_t s = t; s < end; ++s) out[order[s]] = rank;
        t = end;
    }
}

RankVector hard_ranks(std::span<const double> v) {
    require_finite(v);
    RankVector r{std::vector<double>(v.size()), RankKind::kHard, 0.0};
    std::vector<std::uint32_t> order;
    hard_ranks_into(v, r.values, order);
    return r;
}

std::vector<double> isotonic_regression(std::span<const double> v) {
    require_finite(v);
    std::vector<double> out(v.size());
    std::vector<std::uint32_t> starts;
    pav(v, out, starts);
    return out;
}

void soft_rank_into(std::span<const double> v, double epsilon, std::span<double> out,
                    SoftRankPlan& plan) {
    const std::size_t k = v.size();
    plan.epsilon = epsilon;
    if (plan.order.size() != k || !resort(v, plan.order)) argsort(v, plan.order);

    // In sorted order, projection = s - iso(s - w) with w = (1, ..., K).
    thread_local std::vector<double> shifted;
    thread_local std::vector<double> fit;
    shifted.resize(k);
    fit.resize(k);
    for (std::size_t t = 0; t < k; ++t) {
        shifted[t] = v[plan.order[t]] / epsilon - static_cast<double>(t + 1);
    }
    pav(shifted, fit, plan.block_start);
    for (std::size_t t = 0; t < k; ++t) {
        out[plan.order[t]] = v[plan.order[t]] / epsilon - fit[t];
    }
}

void soft_rank_vjp_into(const SoftRankPlan& plan, std::span<const double> upstream,
                        std::span<double> out) {
    // J = (I - B) / epsilon in sorted coordinates, B averaging within pooled blocks.
    const std::size_t k = plan.order.size();
    const std::size_t blocks = plan.block_start.size();
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t begin = plan.block_start[b];
        const std::size_t end = b + 1 < blocks ? plan.block_start[b + 1] : k;
        double mean = 0.0;
        for (std::size_t t = begin; t < end; ++t) mean += upstream[plan.order[t]];
        mean /= static_cast<double>(end - begin);
        for (std::size_t t = begin; t < end; ++t) {
            out[plan.order[t]] = (upstream[plan.order[t]] - mean) / plan.epsilon;
        }
    }
}

RankVector soft_rank(std::span<const double> v, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidInput("soft rank epsilon must be positive");
    require_finite(v);
    RankVector r{std::vector<double>(v.size()), RankKind::kSoft, epsilon};
    SoftRankPlan plan;
    soft_rank_into(v, epsilon, r.values, plan);
    return r;
}

std::vector<double> soft_rank_vjp(std::span<const double> v, double epsilon,
                                  std::span<const double> upstream) {
    if (!(epsilon > 0.0)) throw InvalidInput("soft rank epsilon must be positive");
    require_finite(v);
    if (upstream.size() != v.size()) {
        throw InvalidInput("upstream length " + std::to_string(upstream.size()) +
                           " does not match input length " + std::to_string(v.size()));
    }
    std::vector<double> ranks(v.size());
    std::vector<double> out(v.size());
    SoftRankPlan plan;
    soft_rank_into(v, epsilon, ranks, plan);
    soft_rank_vjp_into(plan, upstream, out);
    return out;
}

}  // namespace pccdr::softrank
