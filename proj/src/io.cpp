#include "pccdr/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pccdr/errors.hpp"

namespace pccdr {
namespace {

constexpr char kMagic[4] = {'P', 'C', 'C', 'M'};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_cell(std::string_view cell, std::size_t line) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("non-numeric cell '" + std::string(cell) + "'", line);
    }
    if (!std::isfinite(value)) {
        throw ValueError("non-finite value at row " + std::to_string(line));
    }
    return value;
}

std::int64_t parse_label(std::string_view cell, std::size_t line) {
    const double v = parse_cell(cell, line);
    if (v != std::floor(v) || std::fabs(v) > 9.0e15) {
        throw ParseError("label is not an integer", line);
    }
    return static_cast<std::int64_t>(v);
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

DataMatrix parse_raw_f32(const std::string& bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw ParseError("missing PCCM header", 1);
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t n = read_u32_le(p + 4);
    const std::size_t d = read_u32_le(p + 8);
    if (n == 0 || d == 0) throw InvalidInput("raw-f32 matrix must have N >= 1 and d >= 1");
    // The remaining 4 header bytes are reserved.
    if (bytes.size() != 16 + n * d * 4) {
        throw ParseError("raw-f32 payload size does not match header shape", 1);
    }
    std::vector<double> values(n * d);
    for (std::size_t i = 0; i < n * d; ++i) {
        std::uint32_t bits = read_u32_le(p + 16 + 4 * i);
        const float f = std::bit_cast<float>(bits);
        if (!std::isfinite(f)) {
            throw ValueError("non-finite value at row " + std::to_string(i / d + 1));
        }
        values[i] = f;
    }
    return DataMatrix{Matrix(n, d, std::move(values)), std::nullopt};
}

}  // namespace

MatrixFormat parse_matrix_format(std::string_view name) {
    if (name == "csv") return MatrixFormat::kCsv;
    if (name == "raw-f32") return MatrixFormat::kRawF32;
    throw InvalidInput("unknown matrix format '" + std::string(name) + "'");
}

DataMatrix parse_csv(std::string_view text, const LoadOptions& options) {
    std::vector<double> values;
    std::vector<std::int64_t> labels;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool header_pending = options.has_header;

    std::vector<std::string_view> cells;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }

        cells.clear();
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }

        if (rows == 0) {
            cols = cells.size();
            if (options.label_column && *options.label_column >= cols) {
                throw InvalidInput("label column " + std::to_string(*options.label_column) +
                                   " out of range");
            }
        } else if (cells.size() != cols) {
            throw ParseError("expected " + std::to_string(cols) + " fields, found " +
                                 std::to_string(cells.size()),
                             line_no);
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (options.label_column && c == *options.label_column) {
                labels.push_back(parse_label(cells[c], line_no));
            } else {
                values.push_back(parse_cell(cells[c], line_no));
            }
        }
        ++rows;
    }

    const std::size_t feature_cols = cols - (options.label_column ? 1 : 0);
    if (rows == 0 || feature_cols == 0) throw InvalidInput("CSV contains no data");
    DataMatrix out{Matrix(rows, feature_cols, std::move(values)), std::nullopt};
    if (options.label_column) out.labels = std::move(labels);
    return out;
}

DataMatrix load_matrix(const std::filesystem::path& path, const LoadOptions& options) {
    const std::string bytes = read_file(path);
    DataMatrix data = options.format == MatrixFormat::kCsv ? parse_csv(bytes, options)
                                                           : parse_raw_f32(bytes);
    validate(data);
    return data;
}

void save_raw_f32(const Matrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kMagic, 4);
    write_u32_le(out, static_cast<std::uint32_t>(m.rows()));
    write_u32_le(out, static_cast<std::uint32_t>(m.cols()));
    write_u32_le(out, 0);
    for (double v : m.values()) write_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    if (!out) throw IoError("write failed for " + path.string());
}

std::string format_embedding_csv(const Embedding& emb) {
    if (emb.rows() == 0 || emb.cols() == 0) throw InvalidInput("cannot save an empty embedding");
    if (!emb.all_finite()) throw ValueError("embedding contains NaN or Inf");
    std::string out;
    out.reserve(emb.size() * 24);
    char buf[32];
    for (std::size_t r = 0; r < emb.rows(); ++r) {
        for (std::size_t c = 0; c < emb.cols(); ++c) {
            if (c) out.push_back(',');
            const auto res = std::to_chars(buf, buf + sizeof buf, emb(r, c),
                                           std::chars_format::general, 17);
            out.append(buf, res.ptr);
        }
        out.push_back('\n');
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

void save_embedding(const Embedding& emb, const std::filesystem::path& path) {
    write_text_file(path, format_embedding_csv(emb));
}

Embedding load_embedding(const std::filesystem::path& path) {
    return load_matrix(path, LoadOptions{}).points;
}

}  // namespace pccdr
