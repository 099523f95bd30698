#include "pccdr/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pccdr/errors.hpp"

namespace pccdr {

DataMatrix make_swiss_roll(std::size_t n, double noise, RunSeed seed, std::vector<double>* t_out) {
    if (n < 1) throw InvalidInput("swiss roll needs n >= 1");
    if (noise < 0.0) throw InvalidInput("noise must be non-negative");
    constexpr double kLo = 1.5 * std::numbers::pi;
    constexpr double kHi = 4.5 * std::numbers::pi;

    auto rng = make_engine(seed, Stream::kDataset);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    DataMatrix out{Matrix(n, 3), std::vector<std::int64_t>(n)};
    if (t_out) t_out->assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = kLo + (kHi - kLo) * unit(rng);
        const double h = 21.0 * unit(rng);
        out.points(i, 0) = t * std::cos(t);
        out.points(i, 1) = h;
        out.points(i, 2) = t * std::sin(t);
        if (noise > 0.0) {
            for (std::size_t c = 0; c < 3; ++c) out.points(i, c) += noise * normal(rng);
        }
        const auto bin = static_cast<std::int64_t>((t - kLo) / (kHi - kLo) *
                                                   static_cast<double>(kSwissRollLabelBins));
        (*out.labels)[i] = std::clamp<std::int64_t>(bin, 0, kSwissRollLabelBins - 1);
        if (t_out) (*t_out)[i] = t;
    }
    return out;
}

DataMatrix make_blobs(std::size_t n, const Matrix& centers, double stddev, RunSeed seed) {
    const std::size_t c = centers.rows();
    if (c == 0 || centers.cols() == 0) throw InvalidInput("blobs need at least one center");
    if (n < c) throw InvalidInput("blobs need at least one point per center");
    if (stddev < 0.0) throw InvalidInput("blob std must be non-negative");

    auto rng = make_engine(seed, Stream::kDataset);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t d = centers.cols();
    DataMatrix out{Matrix(n, d), std::vector<std::int64_t>(n)};

    std::size_t i = 0;
    for (std::size_t b = 0; b < c; ++b) {
        const std::size_t count = n / c + (b < n % c ? 1 : 0);
        for (std::size_t r = 0; r < count; ++r, ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                out.points(i, j) = centers(b, j) + (stddev > 0.0 ? stddev * normal(rng) : 0.0);
            }
            (*out.labels)[i] = static_cast<std::int64_t>(b);
        }
    }
    return out;
}

Matrix random_centers(std::size_t count, std::size_t dim, double half_width, RunSeed seed) {
    if (count == 0 || dim == 0) throw InvalidInput("random centers need count, dim >= 1");
    auto rng = make_engine(seed, Stream::kBlobCenters);
    std::uniform_real_distribution<double> u(-half_width, half_width);
    Matrix centers(count, dim);
    for (double& v : centers.values()) v = u(rng);
    return centers;
}

}  // namespace pccdr
