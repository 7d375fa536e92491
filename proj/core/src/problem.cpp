#include "csot/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csot/error.hpp"

namespace csot {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kSimplexTol = 1e-9;

std::string shape(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

TransportProblem::TransportProblem(DenseMatrix cost, Marginal row_marginal,
                                   Marginal col_marginal, double epsilon, ConstraintKind kind)
    : cost_(std::move(cost)),
      row_marginal_(std::move(row_marginal)),
      col_marginal_(std::move(col_marginal)),
      epsilon_(epsilon),
      kind_(kind) {
  require(cost_.rows() == row_marginal_.size() && cost_.cols() == col_marginal_.size(),
          ErrorCode::kDimensionMismatch,
          "cost is " + shape(cost_) + " but marginals have lengths " +
              std::to_string(row_marginal_.size()) + " and " +
              std::to_string(col_marginal_.size()));
  require(std::isfinite(epsilon_) && epsilon_ > 0.0, ErrorCode::kInvalidInput,
          "epsilon must be positive");
  if (kind_ == ConstraintKind::kCurriculumRowInequality) {
    const double scale = std::max(1.0, row_marginal_.mass());
    require(row_marginal_.mass() >= col_marginal_.mass() - 1e-12 * scale,
            ErrorCode::kInvalidInput,
            "curriculum constraints need row mass >= column mass");
  }
}

TransportProblem TransportProblem::with_cost(DenseMatrix cost) const {
  return TransportProblem(std::move(cost), row_marginal_, col_marginal_, epsilon_, kind_);
}

TransportProblem TransportProblem::with_kind(ConstraintKind kind) const {
  return TransportProblem(cost_, row_marginal_, col_marginal_, epsilon_, kind);
}

StructureContext::StructureContext(DenseMatrix similarity, DenseMatrix predictions,
                                   DenseMatrix labels, double kappa)
    : similarity_(std::move(similarity)),
      predictions_(std::move(predictions)),
      labels_(std::move(labels)),
      kappa_(kappa) {
  const std::size_t b = predictions_.rows();
  require(similarity_.rows() == similarity_.cols(), ErrorCode::kDimensionMismatch,
          "similarity must be square, got " + shape(similarity_));
  require(similarity_.rows() == b, ErrorCode::kDimensionMismatch,
          "similarity is " + shape(similarity_) + " but predictions are " + shape(predictions_));
  require(labels_.rows() == b && labels_.cols() == predictions_.cols(),
          ErrorCode::kDimensionMismatch,
          "labels are " + shape(labels_) + " but predictions are " + shape(predictions_));
  require(std::isfinite(kappa_) && kappa_ >= 0.0, ErrorCode::kInvalidInput,
          "kappa must be nonnegative");

  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const double s = similarity_(i, j);
      require(s >= -1.0 - kSymmetryTol && s <= 1.0 + kSymmetryTol, ErrorCode::kInvalidInput,
              "similarity entry (" + std::to_string(i) + "," + std::to_string(j) +
                  ") outside [-1, 1]");
      require(std::abs(s - similarity_(j, i)) <= kSymmetryTol, ErrorCode::kInvalidInput,
              "similarity is not symmetric at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
    }
  }
  for (std::size_t i = 0; i < b; ++i) {
    double sum = 0.0;
    for (double p : predictions_.row(i)) {
      require(p >= 0.0, ErrorCode::kInvalidInput,
              "prediction row " + std::to_string(i) + " has a negative entry");
      sum += p;
    }
    require(std::abs(sum - 1.0) <= kSimplexTol, ErrorCode::kInvalidInput,
            "prediction row " + std::to_string(i) + " does not sum to 1");

    std::size_t ones = 0;
    for (double l : labels_.row(i)) {
      require(l == 0.0 || l == 1.0, ErrorCode::kInvalidInput,
              "label row " + std::to_string(i) + " is not one-hot");
      ones += l == 1.0;
    }
    require(ones == 1, ErrorCode::kInvalidInput,
            "label row " + std::to_string(i) + " is not one-hot");
  }
}

StructureContext StructureContext::with_kappa(double kappa) const {
  return StructureContext(similarity_, predictions_, labels_, kappa);
}

double row_residual(const DenseMatrix& q, const Marginal& alpha, ConstraintKind kind) {
  const auto sums = row_sums(q);
  double r = 0.0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const double d = sums[i] - alpha[i];
    r = std::max(r, kind == ConstraintKind::kEquality ? std::abs(d) : d);
  }
  return r;
}

double col_residual(const DenseMatrix& q, const Marginal& beta) {
  const auto sums = col_sums(q);
  double r = 0.0;
  for (std::size_t j = 0; j < sums.size(); ++j) r = std::max(r, std::abs(sums[j] - beta[j]));
  return r;
}

double entropic_objective(const DenseMatrix& q, const DenseMatrix& cost, double epsilon) {
  return frobenius_dot(cost, q) + epsilon * entropy_sum(q);
}

}  // namespace csot
