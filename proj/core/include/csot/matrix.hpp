#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace csot {

// Rectangular row-major matrix of doubles. Every solver input and output
// (costs, couplings, predictions, similarities, kernels) is carried in one.
class DenseMatrix {
 public:
  // rows x cols filled with `fill`. Both dimensions must be positive.
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Takes ownership of `values` (row-major). Rejects size mismatches and
  // non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool all_finite() const noexcept;
  DenseMatrix transposed() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

// Nonnegative weight vector with its total mass cached.
class Marginal {
 public:
  explicit Marginal(std::vector<double> entries);

  static Marginal uniform(std::size_t n, double total_mass);

  std::size_t size() const noexcept { return entries_.size(); }
  double mass() const noexcept { return mass_; }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }
  bool has_zero() const noexcept;

 private:
  std::vector<double> entries_;
  double mass_;
};

std::vector<double> row_sums(const DenseMatrix& m);
std::vector<double> col_sums(const DenseMatrix& m);
double total_sum(const DenseMatrix& m);
// Frobenius inner product; dimensions must match.
double frobenius_dot(const DenseMatrix& a, const DenseMatrix& b);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
// Sum of x log x over all entries with 0 log 0 = 0.
double entropy_sum(const DenseMatrix& m);

}  // namespace csot
