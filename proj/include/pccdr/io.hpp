#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pccdr/matrix.hpp"

namespace pccdr {

enum class MatrixFormat { kCsv, kRawF32 };

/// Parses "csv" or "raw-f32". Throws InvalidInput on anything else.
MatrixFormat parse_matrix_format(std::string_view name);

struct LoadOptions {
    MatrixFormat format = MatrixFormat::kCsv;
    bool has_header = false;
    std::optional<std::size_t> label_column;
};

/// Loads a point matrix.
///
/// CSV: comma separated, '.' decimal point, optional single header line, blank
/// trailing lines ignored. raw-f32: magic "PCCM", u32 rows, u32 cols (little
/// endian) followed by rows*cols little-endian float32 values.
///
/// Ragged rows and non-numeric cells raise ParseError carrying the 1-based line
/// number; NaN/Inf cells raise ValueError.
DataMatrix load_matrix(const std::filesystem::path& path, const LoadOptions& options = {});

/// Same as load_matrix for CSV text held in memory.
DataMatrix parse_csv(std::string_view text, const LoadOptions& options = {});

/// Writes raw-f32. Values are narrowed to float.
void save_raw_f32(const Matrix& m, const std::filesystem::path& path);

/// CSV with one row per point and 17 significant digits per value.
void save_embedding(const Embedding& emb, const std::filesystem::path& path);
std::string format_embedding_csv(const Embedding& emb);

/// Loads an embedding CSV written by save_embedding (no header, no labels).
Embedding load_embedding(const std::filesystem::path& path);

/// Writes `text` to `path`, raising IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace pccdr
