#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pccdr/matrix.hpp"

namespace pccdr::plot {

using Rgb = std::array<std::uint8_t, 3>;

/// One palette color per distinct label, assigned in ascending label order.
std::vector<Rgb> categorical_colors(std::span<const std::int64_t> labels);

/// Sequential colormap over distances scaled to [0, 1] by their maximum
/// (near = yellow, far = dark blue).
std::vector<Rgb> distance_colors(std::span<const double> distances);

struct SvgOptions {
    int size_px = 800;
    double radius = 2.5;
    std::optional<std::size_t> highlight;  // drawn with a red outline
};

/// Scatter plot of a 2-D embedding: one <circle> per point, viewport fitted to
/// the data bounds with a 5% margin. `colors` may be empty (uniform gray).
std::string render_svg(const Embedding& emb, std::span<const Rgb> colors,
                       const SvgOptions& options = {});

/// Per-channel min-max normalization of a 3-D embedding to integers in [0, 255],
/// as "r,g,b" lines. Constant channels map to 0.
std::string rgb_csv(const Embedding& emb);

}  // namespace pccdr::plot
