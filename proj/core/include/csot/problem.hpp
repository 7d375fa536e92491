#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "csot/matrix.hpp"

namespace csot {

enum class ConstraintKind {
  kEquality,                 // Q 1 = alpha, Q^T 1 = beta
  kCurriculumRowInequality,  // Q 1 <= alpha, Q^T 1 = beta, |alpha| >= |beta|
};

// Entropic transport problem: minimize <C, Q> + epsilon <Q, log Q> over the
// polytope selected by `kind`.
class TransportProblem {
 public:
  TransportProblem(DenseMatrix cost, Marginal row_marginal, Marginal col_marginal,
                   double epsilon, ConstraintKind kind);

  const DenseMatrix& cost() const noexcept { return cost_; }
  const Marginal& row_marginal() const noexcept { return row_marginal_; }
  const Marginal& col_marginal() const noexcept { return col_marginal_; }
  double epsilon() const noexcept { return epsilon_; }
  ConstraintKind kind() const noexcept { return kind_; }

  std::size_t rows() const noexcept { return cost_.rows(); }
  std::size_t cols() const noexcept { return cost_.cols(); }

  TransportProblem with_cost(DenseMatrix cost) const;
  TransportProblem with_kind(ConstraintKind kind) const;

 private:
  DenseMatrix cost_;
  Marginal row_marginal_;
  Marginal col_marginal_;
  double epsilon_;
  ConstraintKind kind_;
};

// Inputs of the local-coherence regularizers: sample similarity S (BxB),
// predictions P (BxC, simplex rows), one-hot labels L (BxC) and weight kappa.
class StructureContext {
 public:
  StructureContext(DenseMatrix similarity, DenseMatrix predictions, DenseMatrix labels,
                   double kappa);

  const DenseMatrix& similarity() const noexcept { return similarity_; }
  const DenseMatrix& predictions() const noexcept { return predictions_; }
  const DenseMatrix& labels() const noexcept { return labels_; }
  double kappa() const noexcept { return kappa_; }

  std::size_t samples() const noexcept { return predictions_.rows(); }
  std::size_t classes() const noexcept { return predictions_.cols(); }

  StructureContext with_kappa(double kappa) const;

 private:
  DenseMatrix similarity_;
  DenseMatrix predictions_;
  DenseMatrix labels_;
  double kappa_;
};

struct SolveReport {
  std::string algo;
  std::size_t iterations = 0;
  std::vector<double> objective_trace;
  double row_residual = 0.0;  // max_i max(0, (Q1)_i - alpha_i)
  double col_residual = 0.0;  // ||Q^T 1 - beta||_inf
  double wall_time_ms = 0.0;
  bool converged = false;
  std::size_t stalled_steps = 0;  // GCG only: line searches that ran out of backtracks
};

struct Solution {
  DenseMatrix coupling;
  SolveReport report;
  // Diagonal scalings u, v for the scaling solvers; empty otherwise.
  std::vector<double> row_scaling;
  std::vector<double> col_scaling;
};

// One-sided row excess for curriculum problems, |Q1 - alpha|_inf for equality.
double row_residual(const DenseMatrix& q, const Marginal& alpha, ConstraintKind kind);
double col_residual(const DenseMatrix& q, const Marginal& beta);

// <C, Q> + epsilon * sum Q log Q with 0 log 0 = 0.
double entropic_objective(const DenseMatrix& q, const DenseMatrix& cost, double epsilon);

}  // namespace csot
