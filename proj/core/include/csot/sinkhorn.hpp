#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csot/matrix.hpp"
#include "csot/parallel.hpp"
#include "csot/problem.hpp"

namespace csot {

// Shared knobs of the scaling solvers (Sinkhorn, ESI, Dykstra).
struct ScalingOptions {
  std::size_t max_iters = 100;
  // Residual threshold for the `converged` flag, and for early exit when
  // early_stop is set. With early_stop off exactly max_iters iterations run.
  double tol = 1e-9;
  bool early_stop = false;
  std::size_t check_every = 10;
  // Append the entropic objective at every check (every iteration for Dykstra).
  bool record_objective = false;
  Execution exec;
};

// Gibbs kernel K = exp(-C/epsilon) with the marginal-divided copies used by
// the scaling loops: K_alpha = K / alpha (rows), K_beta^T = K^T / beta (rows).
struct ScalingKernel {
  DenseMatrix kernel;
  DenseMatrix kernel_alpha;
  DenseMatrix kernel_beta_t;
};

struct ScalingState {
  std::vector<double> u;
  std::vector<double> v;
};

ScalingKernel make_scaling_kernel(const TransportProblem& problem, const Execution& exec = {});

// diag(u) K diag(v)
DenseMatrix scaled_coupling(const DenseMatrix& kernel, std::span<const double> u,
                            std::span<const double> v);

// Classical entropic OT with equality marginals.
Solution solve_sinkhorn(const TransportProblem& problem, const ScalingOptions& options = {});

}  // namespace csot
