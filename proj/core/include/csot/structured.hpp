#pragma once

#include <cstddef>

#include "csot/matrix.hpp"
#include "csot/parallel.hpp"
#include "csot/problem.hpp"

namespace csot {

// Prediction-level coherence: -<S, (P (.) Q)(P (.) Q)^T>.
double omega_p(const DenseMatrix& q, const StructureContext& ctx);
// Label-level coherence: -<S, (L (.) Q)(L (.) Q)^T>.
double omega_l(const DenseMatrix& q, const StructureContext& ctx);
// Gradient of omega_p + omega_l for symmetric S:
// -2 [P (.) (S (P (.) Q)) + L (.) (S (L (.) Q))].
DenseMatrix grad_omega(const DenseMatrix& q, const StructureContext& ctx);

// <C, Q> + kappa (omega_p + omega_l) + epsilon <Q, log Q>, 0 log 0 = 0.
double csot_objective(const DenseMatrix& q, const TransportProblem& problem,
                      const StructureContext& ctx);

struct GcgConfig {
  std::size_t outer_iters = 10;
  std::size_t inner_iters = 100;
  // Inner ESI residual threshold (its `converged` flag / optional early exit).
  double inner_tol = 1e-9;
  bool inner_early_stop = false;
  double armijo_c1 = 1e-4;
  double armijo_shrink = 0.5;
  std::size_t armijo_max_backtracks = 30;
  // |obj_i - obj_{i-1}| below this marks the solve as converged.
  double objective_tol = 1e-6;
  bool early_stop = false;
  // Reuse the previous inner column scaling instead of the ones vector.
  bool warm_start = false;
  // The linearized solution must satisfy the marginals to within this
  // fraction of the largest row budget, else the solve aborts.
  double inner_feasibility_tol = 0.05;
  Execution exec;

  void validate() const;
};

struct GcgState {
  DenseMatrix q;        // current iterate
  DenseMatrix g;        // linearization C + kappa grad(Omega)(Q)
  DenseMatrix q_tilde;  // linearized subproblem solution
  double eta = 0.0;
  double objective = 0.0;
};

// Generalized conditional gradient over the curriculum polytope, starting
// from alpha beta^T. Each step solves the entropic subproblem with cost G by
// the scaling iteration and picks the step by Armijo backtracking.
Solution solve_csot_gcg(const TransportProblem& problem, const StructureContext& ctx,
                        const GcgConfig& config = {});

}  // namespace csot
