#include "pccdr/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "pccdr/errors.hpp"

namespace pccdr::plot {
namespace {

constexpr Rgb kPalette[] = {
    {31, 119, 180}, {255, 127, 14}, {44, 160, 44},  {214, 39, 40},  {148, 103, 189},
    {140, 86, 75},  {227, 119, 194}, {127, 127, 127}, {188, 189, 34}, {23, 190, 207},
};

// Viridis-like stops, far (0) to near (1) reversed at lookup.
constexpr Rgb kStops[] = {
    {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
};

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    Rgb out{};
    for (std::size_t c = 0; c < 3; ++c) {
        out[c] = static_cast<std::uint8_t>(std::lround(a[c] + (b[c] - a[c]) * t));
    }
    return out;
}

Rgb palette_color(std::size_t index) {
    constexpr std::size_t base = std::size(kPalette);
    if (index < base) return kPalette[index];
    // Beyond the base palette, darken by cycle so colors stay distinct.
    const Rgb& c = kPalette[index % base];
    const double f = 1.0 / (1.0 + static_cast<double>(index / base) * 0.35);
    return {static_cast<std::uint8_t>(c[0] * f), static_cast<std::uint8_t>(c[1] * f),
            static_cast<std::uint8_t>(c[2] * f)};
}

void append_hex(std::string& out, const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
    out += buf;
}

}  // namespace

std::vector<Rgb> categorical_colors(std::span<const std::int64_t> labels) {
    std::map<std::int64_t, std::size_t> slot;
    for (auto l : labels) slot.emplace(l, 0);
    std::size_t next = 0;
    for (auto& [label, index] : slot) index = next++;
    std::vector<Rgb> out;
    out.reserve(labels.size());
    for (auto l : labels) out.push_back(palette_color(slot[l]));
    return out;
}

std::vector<Rgb> distance_colors(std::span<const double> distances) {
    double top = 0.0;
    for (double d : distances) top = std::max(top, d);
    constexpr std::size_t segments = std::size(kStops) - 1;
    std::vector<Rgb> out;
    out.reserve(distances.size());
    for (double d : distances) {
        const double nearness = top > 0.0 ? 1.0 - d / top : 1.0;
        const double pos = nearness * static_cast<double>(segments);
        const std::size_t seg = std::min(segments - 1, static_cast<std::size_t>(pos));
        out.push_back(lerp(kStops[seg], kStops[seg + 1], pos - static_cast<double>(seg)));
    }
    return out;
}

std::string render_svg(const Embedding& emb, std::span<const Rgb> colors,
                       const SvgOptions& options) {
    if (emb.cols() != 2) throw InvalidInput("SVG plots need a 2-D embedding");
    if (!colors.empty() && colors.size() != emb.rows()) {
        throw InvalidInput("color count does not match point count");
    }
    double lo[2] = {0.0, 0.0};
    double hi[2] = {1.0, 1.0};
    for (std::size_t c = 0; c < 2; ++c) {
        if (emb.rows() == 0) break;
        lo[c] = hi[c] = emb(0, c);
        for (std::size_t i = 1; i < emb.rows(); ++i) {
            lo[c] = std::min(lo[c], emb(i, c));
            hi[c] = std::max(hi[c], emb(i, c));
        }
        double span = hi[c] - lo[c];
        if (span <= 0.0) span = 1.0;
        lo[c] -= 0.05 * span;
        hi[c] += 0.05 * span;
    }
    const double size = options.size_px;
    auto px = [&](double v, std::size_t c) { return (v - lo[c]) / (hi[c] - lo[c]) * size; };

    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  options.size_px, options.size_px, options.size_px, options.size_px);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < emb.rows(); ++i) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.2f\" fill=\"",
                      px(emb(i, 0), 0), size - px(emb(i, 1), 1), options.radius);
        out += buf;
        append_hex(out, colors.empty() ? Rgb{90, 90, 90} : colors[i]);
        out += '"';
        if (options.highlight && *options.highlight == i) {
            out += " stroke=\"red\" stroke-width=\"2\"";
        }
        out += "/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string rgb_csv(const Embedding& emb) {
    if (emb.cols() != 3) throw InvalidInput("RGB export needs a 3-D embedding");
    double lo[3];
    double hi[3];
    for (std::size_t c = 0; c < 3; ++c) {
        lo[c] = hi[c] = emb.rows() ? emb(0, c) : 0.0;
        for (std::size_t i = 1; i < emb.rows(); ++i) {
            lo[c] = std::min(lo[c], emb(i, c));
            hi[c] = std::max(hi[c], emb(i, c));
        }
    }
    std::string out;
    char buf[48];
    for (std::size_t i = 0; i < emb.rows(); ++i) {
        long v[3];
        for (std::size_t c = 0; c < 3; ++c) {
            const double span = hi[c] - lo[c];
            v[c] = span > 0.0 ? std::lround((emb(i, c) - lo[c]) / span * 255.0) : 0;
        }
        std::snprintf(buf, sizeof buf, "%ld,%ld,%ld\n", v[0], v[1], v[2]);
        out += buf;
    }
    return out;
}

}  // namespace pccdr::plot
