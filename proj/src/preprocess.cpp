#include "pccdr/preprocess.hpp"

#include <cmath>

#include "pccdr/errors.hpp"

namespace pccdr {

DataMatrix standardize(const DataMatrix& data) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    if (n < 2) throw InvalidInput("standardize needs at least 2 rows");

    DataMatrix out = data;
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += data.points(r, c);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dv = data.points(r, c) - mean;
            var += dv * dv;
        }
        var /= static_cast<double>(n);
        bool constant = true;
        for (std::size_t r = 1; r < n && constant; ++r) {
            constant = data.points(r, c) == data.points(0, c);
        }
        // Rounding in the mean can leave a tiny variance on an exactly constant column.
        const double sd = constant ? 0.0 : std::sqrt(var);
        for (std::size_t r = 0; r < n; ++r) {
            out.points(r, c) = sd > 0.0 ? (data.points(r, c) - mean) / sd : 0.0;
        }
    }
    return out;
}

}  // namespace pccdr
