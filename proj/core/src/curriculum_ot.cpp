#include "csot/curriculum_ot.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "csot/error.hpp"
#include "scaling_loop.hpp"

namespace csot {
namespace {

void require_strictly_positive(const DenseMatrix& m, const char* what) {
  for (double x : m.values())
    require(x > 0.0, ErrorCode::kInvalidInput, std::string(what) + ": matrix must be strictly positive");
}

void require_curriculum(const TransportProblem& problem, const char* algo) {
  require(problem.kind() == ConstraintKind::kCurriculumRowInequality, ErrorCode::kInvalidInput,
          std::string(algo) + " needs curriculum (row-inequality) constraints");
  detail::require_positive_marginals(problem);
}

// In-place row projection of `m` onto {Q1 <= alpha}.
void project_rows(DenseMatrix& m, std::span<const double> alpha) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    double s = 0.0;
    for (double x : r) s += x;
    const double scale = std::min(alpha[i] / s, 1.0);
    for (double& x : r) x *= scale;
  }
}

// In-place column projection of `m` onto {Q^T 1 = beta}; `sums` is scratch.
void project_cols(DenseMatrix& m, std::span<const double> beta, std::vector<double>& sums) {
  std::fill(sums.begin(), sums.end(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) sums[j] += r[j];
  }
  for (std::size_t j = 0; j < sums.size(); ++j) sums[j] = beta[j] / sums[j];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] *= sums[j];
  }
}

}  // namespace

DenseMatrix kl_project_row_inequality(const DenseMatrix& m, const Marginal& alpha) {
  require(alpha.size() == m.rows(), ErrorCode::kDimensionMismatch,
          "alpha length does not match matrix rows");
  require_strictly_positive(m, "kl_project_row_inequality");
  DenseMatrix out = m;
  project_rows(out, alpha.entries());
  return out;
}

DenseMatrix kl_project_col_equality(const DenseMatrix& m, const Marginal& beta) {
  require(beta.size() == m.cols(), ErrorCode::kDimensionMismatch,
          "beta length does not match matrix columns");
  for (double s : col_sums(m))
    require(s > 0.0, ErrorCode::kInvalidInput, "kl_project_col_equality: zero column sum");
  DenseMatrix out = m;
  std::vector<double> scratch(m.cols());
  project_cols(out, beta.entries(), scratch);
  return out;
}

Solution solve_cot_dykstra(const TransportProblem& problem, const ScalingOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  require_curriculum(problem, "solve_cot_dykstra");
  const std::size_t n = problem.rows();
  const std::size_t m = problem.cols();
  const auto alpha = problem.row_marginal().entries();
  const auto beta = problem.col_marginal().entries();
  const double eps = problem.epsilon();

  DykstraState st{DenseMatrix(n, m), DenseMatrix(n, m), DenseMatrix(n, m, 1.0),
                  DenseMatrix(n, m, 1.0)};
  {
    const auto c = problem.cost().values();
    auto q = st.q.values();
    for (std::size_t k = 0; k < q.size(); ++k) {
      q[k] = std::exp(-c[k] / eps);
      if (!(q[k] > 0.0) || !std::isfinite(q[k]))
        detail::throw_scaling_breakdown("cot-dykstra", "kernel exp(-C/epsilon)", eps);
    }
  }

  SolveReport report;
  report.algo = "cot-dykstra";
  std::vector<double> scratch(m);
  for (std::size_t t = 0; t < options.max_iters; ++t) {
    // Q' = P_C1(Q (.) U'),  U' <- U' (.) Q / Q'
    for (std::size_t i = 0; i < n; ++i) {
      const auto q = st.q.row(i);
      auto qp = st.q_prime.row(i);
      auto up = st.u_prime.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        qp[j] = q[j] * up[j];
        s += qp[j];
      }
      const double scale = std::min(alpha[i] / s, 1.0);
      for (std::size_t j = 0; j < m; ++j) {
        qp[j] *= scale;
        up[j] *= q[j] / qp[j];
      }
    }
    // Q = P_C2(Q' (.) U),  U <- U (.) Q' / Q
    {
      auto q = st.q.values();
      const auto qp = st.q_prime.values();
      const auto u = st.u.values();
      for (std::size_t k = 0; k < q.size(); ++k) q[k] = qp[k] * u[k];
    }
    project_cols(st.q, beta, scratch);
    {
      const auto q = st.q.values();
      const auto qp = st.q_prime.values();
      auto u = st.u.values();
      for (std::size_t k = 0; k < q.size(); ++k) u[k] *= qp[k] / q[k];
    }
    if (options.record_objective)
      report.objective_trace.push_back(entropic_objective(st.q, problem.cost(), eps));
  }
  if (!st.q.all_finite() || !st.u.all_finite() || !st.u_prime.all_finite())
    detail::throw_scaling_breakdown("cot-dykstra", "iterates", eps);

  report.iterations = options.max_iters;
  if (!options.record_objective)
    report.objective_trace.push_back(entropic_objective(st.q, problem.cost(), eps));
  report.row_residual = row_residual(st.q, problem.row_marginal(), problem.kind());
  report.col_residual = col_residual(st.q, problem.col_marginal());
  report.converged = options.max_iters > 0 && report.row_residual <= options.tol &&
                     report.col_residual <= options.tol;
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return Solution{std::move(st.q), std::move(report), {}, {}};
}

Solution solve_cot_esi(const TransportProblem& problem, const ScalingOptions& options,
                       std::span<const double> initial_v) {
  require_curriculum(problem, "solve_cot_esi");
  return detail::run_scaling(problem, options, initial_v, detail::RowUpdate::kClamped, "cot-esi");
}

}  // namespace csot
