#include "csot/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "csot/error.hpp"

namespace csot {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols) {
  require(rows > 0 && cols > 0, ErrorCode::kInvalidInput,
          "matrix dimensions must be positive, got " + std::to_string(rows) + "x" +
              std::to_string(cols));
  require(std::isfinite(fill), ErrorCode::kInvalidInput, "matrix fill value must be finite");
  values_.assign(rows * cols, fill);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  require(rows > 0 && cols > 0, ErrorCode::kInvalidInput,
          "matrix dimensions must be positive, got " + std::to_string(rows) + "x" +
              std::to_string(cols));
  require(values_.size() == rows * cols, ErrorCode::kDimensionMismatch,
          "matrix value count " + std::to_string(values_.size()) + " does not match " +
              std::to_string(rows) + "x" + std::to_string(cols));
  require(all_finite(), ErrorCode::kInvalidInput, "matrix contains non-finite values");
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(n * m);
  for (const auto& r : rows) {
    require(r.size() == m, ErrorCode::kDimensionMismatch, "ragged initializer rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return DenseMatrix(n, m, std::move(values));
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Marginal::Marginal(std::vector<double> entries) : entries_(std::move(entries)), mass_(0.0) {
  require(!entries_.empty(), ErrorCode::kInvalidInput, "marginal must be non-empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    require(std::isfinite(entries_[i]) && entries_[i] >= 0.0, ErrorCode::kInvalidInput,
            "marginal entry " + std::to_string(i) + " must be finite and nonnegative");
    mass_ += entries_[i];
  }
}

Marginal Marginal::uniform(std::size_t n, double total_mass) {
  require(n > 0, ErrorCode::kInvalidInput, "uniform marginal needs at least one entry");
  return Marginal(std::vector<double>(n, total_mass / static_cast<double>(n)));
}

bool Marginal::has_zero() const noexcept {
  return std::any_of(entries_.begin(), entries_.end(), [](double x) { return x == 0.0; });
}

std::vector<double> row_sums(const DenseMatrix& m) {
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double x : m.row(i)) s += x;
    out[i] = s;
  }
  return out;
}

std::vector<double> col_sums(const DenseMatrix& m) {
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += r[j];
  }
  return out;
}

double total_sum(const DenseMatrix& m) {
  double s = 0.0;
  for (double x : m.values()) s += x;
  return s;
}

namespace {
void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::kDimensionMismatch,
          std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
              std::to_string(b.cols()));
}
}  // namespace

double frobenius_dot(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "frobenius_dot");
  const auto x = a.values();
  const auto y = b.values();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  const auto x = a.values();
  const auto y = b.values();
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
  return d;
}

double entropy_sum(const DenseMatrix& m) {
  double s = 0.0;
  for (double x : m.values())
    if (x > 0.0) s += x * std::log(x);
  return s;
}

}  // namespace csot
