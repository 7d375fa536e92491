#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "csot/matrix.hpp"

namespace csot {

// Binary layout: "CSOTMAT1", rows (u64 LE), cols (u64 LE), rows*cols
// binary64 LE values in row-major order.
// CSV layout: no header, comma separated, one matrix row per line, cells
// written with 17 significant digits.
enum class MatrixFormat { kCsv, kBinary };

inline constexpr char kBinaryMagic[] = "CSOTMAT1";

// ".csv" selects CSV, anything else the binary format.
MatrixFormat format_for_path(const std::filesystem::path& path);

DenseMatrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_matrix_binary(std::istream& in);
void write_matrix_binary(std::ostream& out, const DenseMatrix& m);

DenseMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
DenseMatrix load_matrix(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void save_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format);
void save_matrix(const std::filesystem::path& path, const DenseMatrix& m);

// A marginal is stored as a 1xn or nx1 matrix (either format).
Marginal load_marginal(const std::filesystem::path& path);
// Class-index vectors are stored as CSV integers (one row or one column).
std::vector<std::size_t> load_labels(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path, const std::vector<std::size_t>& labels);

void write_text_atomic(const std::filesystem::path& path, const std::string& contents);

// Shortest text that parses back to exactly `x` (17 significant digits max).
std::string format_double(double x);

}  // namespace csot
