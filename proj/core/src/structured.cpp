#include "csot/structured.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "csot/curriculum_ot.hpp"
#include "csot/error.hpp"

namespace csot {
namespace {

void require_matching(const DenseMatrix& q, const StructureContext& ctx) {
  require(q.rows() == ctx.samples() && q.cols() == ctx.classes(), ErrorCode::kDimensionMismatch,
          "coupling is " + std::to_string(q.rows()) + "x" + std::to_string(q.cols()) +
              " but structure context is " + std::to_string(ctx.samples()) + "x" +
              std::to_string(ctx.classes()));
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), a.cols());
  const auto x = a.values();
  const auto y = b.values();
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = x[k] * y[k];
  return out;
}

// S * A for square S.
DenseMatrix similarity_times(const DenseMatrix& s, const DenseMatrix& a, const Execution& exec) {
  DenseMatrix out(s.rows(), a.cols());
  for_each_range(s.rows(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto o = out.row(i);
      const auto si = s.row(i);
      for (std::size_t j = 0; j < si.size(); ++j) {
        const double sij = si[j];
        if (sij == 0.0) continue;
        const auto aj = a.row(j);
        for (std::size_t k = 0; k < o.size(); ++k) o[k] += sij * aj[k];
      }
    }
  });
  return out;
}

// -<W (.) Q, S (W (.) Q)>
double coherence(const DenseMatrix& q, const DenseMatrix& weights, const DenseMatrix& s,
                 const Execution& exec) {
  const DenseMatrix wq = hadamard(weights, q);
  return -frobenius_dot(wq, similarity_times(s, wq, exec));
}

double omega_total(const DenseMatrix& q, const StructureContext& ctx, const Execution& exec) {
  return coherence(q, ctx.predictions(), ctx.similarity(), exec) +
         coherence(q, ctx.labels(), ctx.similarity(), exec);
}

DenseMatrix grad_omega_impl(const DenseMatrix& q, const StructureContext& ctx,
                            const Execution& exec) {
  const DenseMatrix& p = ctx.predictions();
  const DenseMatrix& l = ctx.labels();
  const DenseMatrix sp = similarity_times(ctx.similarity(), hadamard(p, q), exec);
  const DenseMatrix sl = similarity_times(ctx.similarity(), hadamard(l, q), exec);
  DenseMatrix g(q.rows(), q.cols());
  const auto pv = p.values();
  const auto lv = l.values();
  const auto spv = sp.values();
  const auto slv = sl.values();
  auto gv = g.values();
  for (std::size_t k = 0; k < gv.size(); ++k) gv[k] = -2.0 * (pv[k] * spv[k] + lv[k] * slv[k]);
  return g;
}

double objective_impl(const DenseMatrix& q, const TransportProblem& problem,
                      const StructureContext& ctx, const Execution& exec) {
  const double structure = ctx.kappa() == 0.0 ? 0.0 : ctx.kappa() * omega_total(q, ctx, exec);
  return frobenius_dot(problem.cost(), q) + structure + problem.epsilon() * entropy_sum(q);
}

}  // namespace

double omega_p(const DenseMatrix& q, const StructureContext& ctx) {
  require_matching(q, ctx);
  return coherence(q, ctx.predictions(), ctx.similarity(), Execution{});
}

double omega_l(const DenseMatrix& q, const StructureContext& ctx) {
  require_matching(q, ctx);
  return coherence(q, ctx.labels(), ctx.similarity(), Execution{});
}

DenseMatrix grad_omega(const DenseMatrix& q, const StructureContext& ctx) {
  require_matching(q, ctx);
  return grad_omega_impl(q, ctx, Execution{});
}

double csot_objective(const DenseMatrix& q, const TransportProblem& problem,
                      const StructureContext& ctx) {
  require_matching(q, ctx);
  require(problem.rows() == q.rows() && problem.cols() == q.cols(), ErrorCode::kDimensionMismatch,
          "coupling does not match the transport problem");
  for (double x : q.values())
    require(x >= 0.0, ErrorCode::kInvalidInput, "csot_objective: coupling has a negative entry");
  return objective_impl(q, problem, ctx, Execution{});
}

void GcgConfig::validate() const {
  require(outer_iters >= 1, ErrorCode::kInvalidInput, "outer_iters must be at least 1");
  require(inner_iters >= 1, ErrorCode::kInvalidInput, "inner_iters must be at least 1");
  require(armijo_c1 > 0.0 && armijo_c1 < 1.0, ErrorCode::kInvalidInput,
          "armijo_c1 must lie in (0, 1)");
  require(armijo_shrink > 0.0 && armijo_shrink < 1.0, ErrorCode::kInvalidInput,
          "armijo_shrink must lie in (0, 1)");
  require(inner_feasibility_tol > 0.0, ErrorCode::kInvalidInput,
          "inner_feasibility_tol must be positive");
}

Solution solve_csot_gcg(const TransportProblem& problem, const StructureContext& ctx,
                        const GcgConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  require(problem.kind() == ConstraintKind::kCurriculumRowInequality, ErrorCode::kInvalidInput,
          "solve_csot_gcg needs curriculum (row-inequality) constraints");
  require(problem.rows() == ctx.samples() && problem.cols() == ctx.classes(),
          ErrorCode::kDimensionMismatch, "transport problem does not match structure context");

  const std::size_t n = problem.rows();
  const std::size_t m = problem.cols();
  const auto alpha = problem.row_marginal().entries();
  const auto beta = problem.col_marginal().entries();
  const double eps = problem.epsilon();
  const double kappa = ctx.kappa();
  const Execution& exec = config.exec;

  ScalingOptions inner;
  inner.max_iters = config.inner_iters;
  inner.tol = config.inner_tol;
  inner.early_stop = config.inner_early_stop;
  inner.exec = exec;

  const double feasibility_bound =
      config.inner_feasibility_tol * *std::max_element(alpha.begin(), alpha.end());

  GcgState st{DenseMatrix(n, m), DenseMatrix(n, m), DenseMatrix(n, m), 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) st.q(i, j) = alpha[i] * beta[j];
  st.objective = objective_impl(st.q, problem, ctx, exec);

  SolveReport report;
  report.algo = "csot";
  report.objective_trace.push_back(st.objective);
  std::vector<double> warm_v;

  std::size_t outer = 0;
  while (outer < config.outer_iters) {
    // Linearize the smooth part at Q: G = C + kappa * grad(Omega)(Q).
    st.g = problem.cost();
    if (kappa != 0.0) {
      const DenseMatrix grad = grad_omega_impl(st.q, ctx, exec);
      auto gv = st.g.values();
      const auto dv = grad.values();
      for (std::size_t k = 0; k < gv.size(); ++k) gv[k] += kappa * dv[k];
    }

    Solution sub = solve_cot_esi(problem.with_cost(st.g), inner,
                                 config.warm_start ? std::span<const double>(warm_v)
                                                   : std::span<const double>{});
    if (sub.report.row_residual > feasibility_bound || sub.report.col_residual > feasibility_bound)
      throw_error(ErrorCode::kInternal,
                  "solve_csot_gcg: linearized subproblem returned an infeasible coupling (row " +
                      std::to_string(sub.report.row_residual) + ", col " +
                      std::to_string(sub.report.col_residual) + ")");
    if (config.warm_start) warm_v = sub.col_scaling;
    st.q_tilde = std::move(sub.coupling);

    // Directional derivative of the full objective along Q~ - Q. Entries
    // with Q = 0 < Q~ have an entropy slope of -inf; they are left out of the
    // sum and only ever make the direction steeper.
    double slope = 0.0;
    bool unbounded_slope = false;
    {
      const auto q = st.q.values();
      const auto qt = st.q_tilde.values();
      const auto g = st.g.values();
      for (std::size_t k = 0; k < q.size(); ++k) {
        const double d = qt[k] - q[k];
        slope += g[k] * d;
        if (q[k] > 0.0)
          slope += eps * (std::log(q[k]) + 1.0) * d;
        else if (d > 0.0)
          unbounded_slope = true;
      }
    }

    double next_objective = st.objective;
    st.eta = 0.0;
    if (slope < 0.0 || unbounded_slope) {
      const double armijo_slope = std::min(slope, 0.0);
      double eta = 1.0;
      bool accepted = false;
      DenseMatrix candidate(n, m);
      for (std::size_t bt = 0; bt <= config.armijo_max_backtracks; ++bt) {
        auto c = candidate.values();
        const auto q = st.q.values();
        const auto qt = st.q_tilde.values();
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = (1.0 - eta) * q[k] + eta * qt[k];
        const double f = objective_impl(candidate, problem, ctx, exec);
        if (f <= st.objective + config.armijo_c1 * eta * armijo_slope) {
          accepted = true;
          next_objective = f;
          break;
        }
        eta *= config.armijo_shrink;
      }
      if (accepted) {
        st.eta = eta;
        st.q = std::move(candidate);
      } else {
        ++report.stalled_steps;
      }
    }
    st.objective = next_objective;
    report.objective_trace.push_back(st.objective);
    ++outer;

    const auto& tr = report.objective_trace;
    report.converged = std::abs(tr[tr.size() - 1] - tr[tr.size() - 2]) < config.objective_tol;
    if (report.converged && config.early_stop) break;
  }

  report.iterations = outer;
  report.row_residual = row_residual(st.q, problem.row_marginal(), problem.kind());
  report.col_residual = col_residual(st.q, problem.col_marginal());
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return Solution{std::move(st.q), std::move(report), {}, {}};
}

}  // namespace csot
