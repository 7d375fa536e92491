#include "csot/sinkhorn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "csot/error.hpp"
#include "scaling_loop.hpp"

namespace csot {
namespace detail {
namespace {

// out_i = <a.row(i), x> over rows [begin, end).
void matvec_rows(const DenseMatrix& a, std::span<const double> x, std::span<double> out,
                 const Execution& exec) {
  for_each_range(a.rows(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = a.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
      out[i] = s;
    }
  });
}

bool all_positive_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double e) { return std::isfinite(e) && e > 0.0; });
}

}  // namespace

void require_positive_marginals(const TransportProblem& problem) {
  require(!problem.row_marginal().has_zero() && !problem.col_marginal().has_zero(),
          ErrorCode::kInvalidInput,
          "marginals must be strictly positive for the scaling solvers");
}

void throw_scaling_breakdown(const std::string& algo, const std::string& what, double epsilon) {
  throw_error(ErrorCode::kNumerical,
              algo + ": " + what + " over/underflowed at epsilon=" + std::to_string(epsilon) +
                  "; try a larger epsilon");
}

Solution run_scaling(const TransportProblem& problem, const ScalingOptions& options,
                     std::span<const double> initial_v, RowUpdate row_update,
                     const std::string& algo) {
  const auto start = std::chrono::steady_clock::now();
  require_positive_marginals(problem);
  require(options.check_every > 0, ErrorCode::kInvalidInput, "check_every must be positive");

  const std::size_t n = problem.rows();
  const std::size_t m = problem.cols();
  const auto alpha = problem.row_marginal().entries();
  const auto beta = problem.col_marginal().entries();
  const Execution& exec = options.exec;

  const ScalingKernel k = make_scaling_kernel(problem, exec);

  ScalingState state{std::vector<double>(n, 1.0), std::vector<double>(m, 1.0)};
  if (!initial_v.empty()) {
    require(initial_v.size() == m, ErrorCode::kDimensionMismatch,
            "initial column scaling has the wrong length");
    require(all_positive_finite(initial_v), ErrorCode::kInvalidInput,
            "initial column scaling must be positive");
    state.v.assign(initial_v.begin(), initial_v.end());
  }

  std::vector<double> kv(n);
  std::vector<double> ktu(m);
  SolveReport report;
  report.algo = algo;

  // Row-side stationarity: how far the next u-update would move the row sums.
  auto row_stationarity = [&] {
    matvec_rows(k.kernel, state.v, kv, Execution{});
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double target = row_update == RowUpdate::kClamped ? std::min(alpha[i], kv[i]) : alpha[i];
      r = std::max(r, std::abs(state.u[i] * kv[i] - target));
    }
    return r;
  };
  auto col_gap = [&] {
    double r = 0.0;
    for (std::size_t j = 0; j < m; ++j) r = std::max(r, std::abs(state.v[j] * ktu[j] * beta[j] - beta[j]));
    return r;
  };

  bool converged = false;
  std::size_t it = 0;
  while (it < options.max_iters) {
    matvec_rows(k.kernel_alpha, state.v, kv, exec);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = 1.0 / kv[i];
      state.u[i] = row_update == RowUpdate::kClamped ? std::min(u, 1.0) : u;
    }
    if (!all_positive_finite(state.u)) throw_scaling_breakdown(algo, "row scaling u", problem.epsilon());

    matvec_rows(k.kernel_beta_t, state.u, ktu, exec);
    for (std::size_t j = 0; j < m; ++j) state.v[j] = 1.0 / ktu[j];
    if (!all_positive_finite(state.v)) throw_scaling_breakdown(algo, "column scaling v", problem.epsilon());
    ++it;

    if (it % options.check_every == 0 || it == options.max_iters) {
      converged = row_stationarity() <= options.tol && col_gap() <= options.tol;
      if (options.record_objective) {
        const DenseMatrix q = scaled_coupling(k.kernel, state.u, state.v);
        report.objective_trace.push_back(entropic_objective(q, problem.cost(), problem.epsilon()));
      }
      if (converged && options.early_stop) break;
    }
  }
  if (it == 0) converged = false;

  DenseMatrix q = scaled_coupling(k.kernel, state.u, state.v);
  report.iterations = it;
  if (!options.record_objective)
    report.objective_trace.push_back(entropic_objective(q, problem.cost(), problem.epsilon()));
  report.row_residual = row_residual(q, problem.row_marginal(), problem.kind());
  report.col_residual = col_residual(q, problem.col_marginal());
  report.converged = converged;
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return Solution{std::move(q), std::move(report), std::move(state.u), std::move(state.v)};
}

}  // namespace detail

ScalingKernel make_scaling_kernel(const TransportProblem& problem, const Execution& exec) {
  const std::size_t n = problem.rows();
  const std::size_t m = problem.cols();
  const auto alpha = problem.row_marginal().entries();
  const auto beta = problem.col_marginal().entries();
  const double eps = problem.epsilon();

  ScalingKernel k{DenseMatrix(n, m), DenseMatrix(n, m), DenseMatrix(m, n)};
  bool finite = true;
  for_each_range(n, exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto c = problem.cost().row(i);
      auto kr = k.kernel.row(i);
      auto ka = k.kernel_alpha.row(i);
      for (std::size_t j = 0; j < m; ++j) {
        kr[j] = std::exp(-c[j] / eps);
        ka[j] = kr[j] / alpha[i];
      }
    }
  });
  for (double x : k.kernel_alpha.values()) finite = finite && std::isfinite(x);
  if (!finite) detail::throw_scaling_breakdown("kernel", "exp(-C/epsilon)", eps);

  for (std::size_t i = 0; i < n; ++i) {
    const auto kr = k.kernel.row(i);
    for (std::size_t j = 0; j < m; ++j) k.kernel_beta_t(j, i) = kr[j] / beta[j];
  }
  return k;
}

DenseMatrix scaled_coupling(const DenseMatrix& kernel, std::span<const double> u,
                            std::span<const double> v) {
  require(u.size() == kernel.rows() && v.size() == kernel.cols(), ErrorCode::kDimensionMismatch,
          "scaling vectors do not match the kernel");
  DenseMatrix q(kernel.rows(), kernel.cols());
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    const auto kr = kernel.row(i);
    auto qr = q.row(i);
    for (std::size_t j = 0; j < kernel.cols(); ++j) qr[j] = u[i] * kr[j] * v[j];
  }
  return q;
}

Solution solve_sinkhorn(const TransportProblem& problem, const ScalingOptions& options) {
  require(problem.kind() == ConstraintKind::kEquality, ErrorCode::kInvalidInput,
          "solve_sinkhorn needs equality constraints");
  require(std::abs(problem.row_marginal().mass() - problem.col_marginal().mass()) <= 1e-9,
          ErrorCode::kInvalidInput, "sinkhorn marginals must carry equal mass");
  return detail::run_scaling(problem, options, {}, detail::RowUpdate::kEquality, "sinkhorn");
}

}  // namespace csot
