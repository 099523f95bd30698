#pragma once

#include <vector>

#include "pccdr/matrix.hpp"
#include "pccdr/random.hpp"

namespace pccdr {

inline constexpr std::size_t kSwissRollLabelBins = 8;

/// Classical Swiss roll: t ~ U[1.5 pi, 4.5 pi], h ~ U[0, 21], point
/// (t cos t, h, t sin t) plus isotropic Gaussian noise of std `noise`.
/// Labels bin t into kSwissRollLabelBins equal-width classes; the raw t values
/// are written to `t_out` when given.
DataMatrix make_swiss_roll(std::size_t n, double noise, RunSeed seed,
                           std::vector<double>* t_out = nullptr);

/// Gaussian blobs around `centers` (rows). Points are assigned to centers in
/// contiguous runs whose sizes differ by at most one; the label is the center index.
DataMatrix make_blobs(std::size_t n, const Matrix& centers, double stddev, RunSeed seed);

/// `count` centers drawn uniformly from [-half_width, half_width]^dim.
Matrix random_centers(std::size_t count, std::size_t dim, double half_width, RunSeed seed);

}  // namespace pccdr
