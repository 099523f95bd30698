#pragma once

// Central finite differences.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

inline std::vector<double> central_difference(std::span<double> x, const std::function<double()>& f,
                                              double h = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + h;
        const double up = f();
        x[i] = saved - h;
        const double down = f();
        x[i] = saved;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

// max |a - b| / max(max |b|, floor): a norm-wise relative error that does not
// blow up on individual near-zero entries.
inline double relative_error(std::span<const double> a, std::span<const double> b,
                             double floor = 1e-8) {
    double diff = 0.0;
    double scale = floor;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return diff / scale;
}

}  // namespace oracle
