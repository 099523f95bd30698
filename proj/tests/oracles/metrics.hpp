#pragma once

// Direct-from-definition embedding metrics. O(N^3); N <= 40 or so.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "oracles/ranking.hpp"
#include "pccdr/matrix.hpp"

namespace oracle {

inline double distance(const pccdr::Matrix& m, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const double d = m(i, c) - m(j, c);
        s += d * d;
    }
    return std::sqrt(s);
}

// rank[i][j]: 1 + number of l != i closer to i than j, with equal distances
// counted as closer when l < j. rank[i][i] = 0.
inline std::vector<std::vector<std::size_t>> rank_table(const pccdr::Matrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::vector<std::size_t>> rank(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dij = distance(m, i, j);
            std::size_t r = 1;
            for (std::size_t l = 0; l < n; ++l) {
                if (l == i || l == j) continue;
                const double dil = distance(m, i, l);
                if (dil < dij || (dil == dij && l < j)) ++r;
            }
            rank[i][j] = r;
        }
    }
    return rank;
}

struct Local {
    double trustworthiness;
    double continuity;
    double mrre_false;
    double mrre_missing;
};

inline Local local_metrics(const pccdr::Matrix& x, const pccdr::Matrix& y, std::size_t k) {
    const auto rx = rank_table(x);
    const auto ry = rank_table(y);
    const std::size_t n = x.rows();
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    double t = 0.0;
    double c = 0.0;
    double mf = 0.0;
    double mm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const bool in_x = rx[i][j] <= k;
            const bool in_y = ry[i][j] <= k;
            const double a = static_cast<double>(rx[i][j]);
            const double b = static_cast<double>(ry[i][j]);
            if (in_y && !in_x) t += a - kd;
            if (in_x && !in_y) c += b - kd;
            if (in_y) mf += std::abs(a - b) / b;
            if (in_x) mm += std::abs(b - a) / a;
        }
    }
    const double tc_norm = 2.0 / (nd * kd * (2.0 * nd - 3.0 * kd - 1.0));
    double harmonic = 0.0;
    for (std::size_t l = 1; l <= k; ++l) {
        harmonic += std::abs(nd - 2.0 * static_cast<double>(l) + 1.0) / static_cast<double>(l);
    }
    const double mrre_norm = nd * harmonic;
    return {1.0 - tc_norm * t, 1.0 - tc_norm * c, 1.0 - mf / mrre_norm, 1.0 - mm / mrre_norm};
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// (pearson, spearman) of all pairwise distances i < j.
inline std::pair<double, double> global_correlation(const pccdr::Matrix& x, const pccdr::Matrix& y) {
    std::vector<double> dx;
    std::vector<double> dy;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = i + 1; j < x.rows(); ++j) {
            dx.push_back(distance(x, i, j));
            dy.push_back(distance(y, i, j));
        }
    }
    return {pearson(dx, dy), pearson(counting_ranks(dx), counting_ranks(dy))};
}

}  // namespace oracle
