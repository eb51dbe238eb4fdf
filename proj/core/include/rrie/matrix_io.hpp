#pragma once

#include <filesystem>
#include <iosfwd>

#include "rrie/types.hpp"

namespace rrie {

/// Dense matrix files.
///
/// CSV: one row per line, comma separated decimal floats, no header.
/// Binary: 8-byte magic "RRIEMAT1", u64 rows, u64 cols, then rows*cols
/// IEEE-754 doubles; every field little-endian, values row-major.
enum class MatrixFormat { Csv, Binary };

inline constexpr char kMatrixMagic[8] = {'R', 'R', 'I', 'E', 'M', 'A', 'T', '1'};

Matrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const Matrix& a);

Matrix read_matrix_binary(std::istream& in);
void write_matrix_binary(std::ostream& out, const Matrix& a);

/// Reads either format; binary is detected by its magic.
Matrix read_matrix(const std::filesystem::path& path);

/// `.csv` (any case) selects CSV, everything else binary.
MatrixFormat format_for_path(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& a);

}  // namespace rrie
