#pragma once

#include <span>

#include "csot/matrix.hpp"
#include "csot/problem.hpp"
#include "csot/sinkhorn.hpp"

namespace csot {

// KL projection onto {Q >= 0 : Q 1 <= alpha}: diag(min(alpha / M1, 1)) M.
DenseMatrix kl_project_row_inequality(const DenseMatrix& m, const Marginal& alpha);
// KL projection onto {Q >= 0 : Q^T 1 = beta}: M diag(beta / M^T 1).
DenseMatrix kl_project_col_equality(const DenseMatrix& m, const Marginal& beta);

struct DykstraState {
  DenseMatrix q;
  DenseMatrix q_prime;
  DenseMatrix u;
  DenseMatrix u_prime;
};

// Alternating KL projections with dense correction matrices. Kept as the
// reference implementation that the scaling iteration must reproduce.
Solution solve_cot_dykstra(const TransportProblem& problem, const ScalingOptions& options = {});

// Efficient scaling iteration: Q = diag(u) K diag(v) with
// u = min(alpha / (K v), 1), v = beta / (K^T u), v starting at `initial_v`
// (the ones vector when empty).
Solution solve_cot_esi(const TransportProblem& problem, const ScalingOptions& options = {},
                       std::span<const double> initial_v = {});

}  // namespace csot
