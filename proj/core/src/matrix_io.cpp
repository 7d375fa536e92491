#include "csot/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "csot/error.hpp"

namespace csot {
namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (std::size_t k = 0; k < 8; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

bool get_u64_le(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  v = 0;
  for (std::size_t k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  // Shortest round-trip representation; never more than 17 significant digits.
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw_error(ErrorCode::kInternal, "to_chars failed");
  return std::string(buf.data(), ptr);
}

MatrixFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::kCsv : MatrixFormat::kBinary;
}

DenseMatrix read_matrix_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      const std::string_view cell =
          trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      require(!cell.empty() && ec == std::errc{} && ptr == last && std::isfinite(v),
              ErrorCode::kNonNumeric,
              "non-numeric cell '" + std::string(cell) + "' on line " + std::to_string(line_no));
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else {
      require(count == cols, ErrorCode::kRaggedRow,
              "ragged row on line " + std::to_string(line_no) + ": expected " +
                  std::to_string(cols) + " cells, found " + std::to_string(count));
    }
    ++rows;
  }
  require(rows > 0, ErrorCode::kTruncated, "csv matrix is empty");
  return DenseMatrix(rows, cols, std::move(values));
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out << ',';
      out << format_double(r[j]);
    }
    out << '\n';
  }
}

DenseMatrix read_matrix_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()))
    throw_error(ErrorCode::kTruncated, "binary matrix truncated inside the magic header");
  require(std::memcmp(magic.data(), kBinaryMagic, 8) == 0, ErrorCode::kBadMagic,
          "bad magic bytes: expected CSOTMAT1");
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  if (!get_u64_le(in, rows) || !get_u64_le(in, cols))
    throw_error(ErrorCode::kTruncated, "binary matrix truncated inside the shape header");
  require(rows > 0 && cols > 0, ErrorCode::kInvalidInput, "binary matrix has a zero dimension");
  require(cols <= (std::uint64_t{1} << 40) / rows, ErrorCode::kInvalidInput,
          "binary matrix shape is implausibly large");
  std::vector<double> values(rows * cols);
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::uint64_t bits = 0;
    if (!get_u64_le(in, bits))
      throw_error(ErrorCode::kTruncated, "binary matrix payload truncated after " +
                                             std::to_string(k) + " of " +
                                             std::to_string(values.size()) + " values");
    values[k] = std::bit_cast<double>(bits);
  }
  return DenseMatrix(rows, cols, std::move(values));
}

void write_matrix_binary(std::ostream& out, const DenseMatrix& m) {
  out.write(kBinaryMagic, 8);
  put_u64_le(out, m.rows());
  put_u64_le(out, m.cols());
  for (double v : m.values()) put_u64_le(out, std::bit_cast<std::uint64_t>(v));
}

DenseMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  auto in = open_input(path);
  return format == MatrixFormat::kCsv ? read_matrix_csv(in) : read_matrix_binary(in);
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  return load_matrix(path, format_for_path(path));
}

void write_text_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    require(static_cast<bool>(out), ErrorCode::kIo, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw_error(ErrorCode::kIo, "cannot move output into place at '" + path.string() + "'");
  }
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format) {
  std::ostringstream out(std::ios::binary);
  if (format == MatrixFormat::kCsv)
    write_matrix_csv(out, m);
  else
    write_matrix_binary(out, m);
  write_text_atomic(path, out.str());
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  save_matrix(path, m, format_for_path(path));
}

Marginal load_marginal(const std::filesystem::path& path) {
  const DenseMatrix m = load_matrix(path);
  require(m.rows() == 1 || m.cols() == 1, ErrorCode::kDimensionMismatch,
          "marginal file '" + path.string() + "' must hold a single row or column");
  return Marginal(std::vector<double>(m.values().begin(), m.values().end()));
}

std::vector<std::size_t> load_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  const DenseMatrix m = read_matrix_csv(in);
  require(m.rows() == 1 || m.cols() == 1, ErrorCode::kDimensionMismatch,
          "label file '" + path.string() + "' must hold a single row or column");
  std::vector<std::size_t> labels;
  labels.reserve(m.size());
  for (double v : m.values()) {
    require(v >= 0.0 && v == std::floor(v) && v < 9.0e15, ErrorCode::kNonNumeric,
            "label file '" + path.string() + "' holds a non-integer or negative label");
    labels.push_back(static_cast<std::size_t>(v));
  }
  return labels;
}

void save_labels(const std::filesystem::path& path, const std::vector<std::size_t>& labels) {
  std::string text;
  for (std::size_t y : labels) {
    text += std::to_string(y);
    text += '\n';
  }
  write_text_atomic(path, text);
}

}  // namespace csot
