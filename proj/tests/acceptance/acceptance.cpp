// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any of them fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "csot/bench.hpp"
#include "csot/curriculum_ot.hpp"
#include "csot/matrix_io.hpp"
#include "csot/primitives.hpp"
#include "csot/relabel.hpp"
#include "csot/simlab.hpp"
#include "csot/sinkhorn.hpp"
#include "csot/structured.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace csot;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << why << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ScalingOptions iterations(std::size_t n) {
  ScalingOptions o;
  o.max_iters = n;
  return o;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// --------------------------------------------------------------------- 1
Verdict scaling_iteration_matches_dykstra() {
  Verdict v;
  const auto t0 = Clock::now();
  auto rng = testing::make_rng(1001);
  std::uniform_int_distribution<std::size_t> rows(2, 200), cols(2, 20);
  const double budgets[] = {0.3, 0.5, 0.9};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t b = trial == 0 ? 200 : rows(rng), c = trial == 0 ? 20 : cols(rng);
    const auto p = testing::cot_instance(b, c, budgets[trial % 3], 0.1, rng);
    worst = std::max(worst, max_abs_diff(solve_cot_esi(p, iterations(500)).coupling,
                                         solve_cot_dykstra(p, iterations(500)).coupling));
  }
  const double secs = seconds_since(t0);
  v.detail << "50 instances, max |Q_esi - Q_dykstra| = " << fmt(worst) << ", " << fmt(secs) << " s";
  v.require(worst < 1e-6, "difference >= 1e-6");
  v.require(secs < 60, "runtime >= 60 s");
  return v;
}

// --------------------------------------------------------------------- 2
Verdict equal_masses_reduce_to_sinkhorn() {
  Verdict v;
  auto rng = testing::make_rng(1002);
  std::uniform_int_distribution<std::size_t> rows(2, 150), cols(2, 20);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::cot_instance(rows(rng), cols(rng), 1.0, 0.1, rng);
    // Both iterations approach the same limit at a rate set by the cost range
    // over epsilon; the slowest of these instances needs about 3000 steps.
    const auto esi = solve_cot_esi(p, iterations(10000));
    const auto sk = solve_sinkhorn(p.with_kind(ConstraintKind::kEquality), iterations(10000));
    v.require(esi.report.converged && sk.report.converged, "solver did not converge");
    worst = std::max(worst, max_abs_diff(esi.coupling, sk.coupling));
  }
  v.detail << "20 instances, 10000 iterations, max |Q_esi - Q_sinkhorn| = " << fmt(worst);
  v.require(worst < 1e-8, "difference >= 1e-8");
  return v;
}

// --------------------------------------------------------------------- 3
Verdict converged_solves_are_feasible() {
  Verdict v;
  auto rng = testing::make_rng(1003);
  std::size_t solves = 0, converged = 0;
  double worst_row = 0, worst_col = 0, worst_mass = 0;
  auto check = [&](const Solution& s, double m) {
    ++solves;
    if (!s.report.converged) return;
    ++converged;
    worst_row = std::max(worst_row, s.report.row_residual);
    worst_col = std::max(worst_col, s.report.col_residual);
    worst_mass = std::max(worst_mass, std::abs(total_sum(s.coupling) - m));
  };
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t b = 10 + 8 * trial, c = 2 + trial % 10;
    const double m = 0.2 + 0.025 * trial;
    const auto p = testing::cot_instance(b, c, m, 0.1, rng);
    check(solve_cot_esi(p, iterations(500)), m);
    if (trial % 3 == 0) check(solve_cot_dykstra(p, iterations(500)), m);
    if (trial % 2 == 0) {
      const auto ctx = testing::structure_instance(b, c, 1.0, rng);
      check(solve_csot_gcg(p, ctx), m);
    }
  }
  v.detail << converged << "/" << solves << " converged; max row " << fmt(worst_row) << ", col "
           << fmt(worst_col) << ", |sum Q - m| " << fmt(worst_mass);
  v.require(converged == solves, "some solves did not converge");
  v.require(worst_row < 1e-8 && worst_col < 1e-8, "residual >= 1e-8");
  v.require(worst_mass < 1e-10, "mass error >= 1e-10");
  return v;
}

// --------------------------------------------------------------------- 4
Verdict gradient_matches_finite_differences() {
  Verdict v;
  auto rng = testing::make_rng(1004);
  std::uniform_int_distribution<std::size_t> rows(2, 32), cols(2, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t b = trial == 0 ? 32 : rows(rng), c = trial == 0 ? 8 : cols(rng);
    const auto ctx = testing::structure_instance(b, c, 1.0, rng);
    const auto q = testing::uniform_matrix(b, c, rng, 0, 1.0 / static_cast<double>(b));
    const auto fd = oracle::central_difference(
        [&](const DenseMatrix& x) { return omega_p(x, ctx) + omega_l(x, ctx); }, q, 1e-6);
    worst = std::max(worst, oracle::max_rel_error(grad_omega(q, ctx), fd, 1e-8));
  }
  v.detail << "20 instances, max relative error " << fmt(worst);
  v.require(worst < 1e-4, "relative error >= 1e-4");
  return v;
}

// --------------------------------------------------------------------- 5
Verdict gcg_descends_to_stationarity() {
  Verdict v;
  const auto t0 = Clock::now();
  auto rng = testing::make_rng(1005);
  double worst_rise = -INFINITY, worst_last_delta = 0;
  std::size_t stalls = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = testing::cot_instance(256, 10, 0.5, 0.1, rng);
    const auto ctx = testing::structure_instance(256, 10, 1.0, rng);
    const auto sol = solve_csot_gcg(p, ctx);
    const auto& t = sol.report.objective_trace;
    v.require(t.size() == 11, "trace length != 11");
    for (std::size_t i = 1; i < t.size(); ++i) worst_rise = std::max(worst_rise, t[i] - t[i - 1]);
    worst_last_delta = std::max(worst_last_delta, std::abs(t.back() - t[t.size() - 2]));
    stalls += sol.report.stalled_steps;
  }
  const double secs = seconds_since(t0);
  v.detail << "5 instances 256x10, largest step change " << fmt(worst_rise) << ", final |delta| "
           << fmt(worst_last_delta) << ", stalls " << stalls << ", " << fmt(secs) << " s";
  v.require(worst_rise <= 1e-12, "objective increased");
  v.require(worst_last_delta < 1e-6, "final |delta| >= 1e-6");
  v.require(secs < 30, "runtime >= 30 s");
  return v;
}

// --------------------------------------------------------------------- 6
Verdict kappa_zero_reduces_to_curriculum() {
  Verdict v;
  auto rng = testing::make_rng(1006);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t b = 20 + 25 * trial, c = 2 + trial;
    const auto p = testing::cot_instance(b, c, 0.3 + 0.07 * trial, 0.1, rng);
    const auto ctx = testing::structure_instance(b, c, 0.0, rng);
    worst = std::max(worst, max_abs_diff(solve_csot_gcg(p, ctx).coupling, solve_cot_esi(p).coupling));
  }
  v.detail << "10 instances, max |Q_gcg - Q_esi| = " << fmt(worst);
  v.require(worst < 1e-6, "difference >= 1e-6");
  return v;
}

// --------------------------------------------------------------------- 7
Verdict scaling_iteration_is_faster() {
  Verdict v;
  const auto t0 = Clock::now();
  BenchConfig cfg;
  cfg.sizes = {{2000, 2000}, {3000, 3000}};
  cfg.seed = 7;
  const auto results = run_benchmark(cfg);
  for (std::size_t k = 0; k + 1 < results.size(); k += 2) {
    const auto& vda = results[k];
    const auto& esi = results[k + 1];
    const double speedup = vda.median_ms / esi.median_ms;
    v.detail << vda.rows << "x" << vda.cols << ": vda " << fmt(vda.median_ms) << " ms, esi "
             << fmt(esi.median_ms) << " ms (" << fmt(speedup) << "x); ";
    v.require(esi.median_ms <= vda.median_ms, "esi slower at " + std::to_string(vda.rows));
    if (vda.rows == 3000) v.require(speedup >= 1.5, "speedup < 1.5 at 3000x3000");
  }
  const double secs = seconds_since(t0);
  v.detail << fmt(secs) << " s";
  v.require(secs < 300, "runtime >= 300 s");
  return v;
}

// --------------------------------------------------------------------- 8
Verdict smaller_epsilon_is_sharper() {
  Verdict v;
  auto rng = testing::make_rng(1008);
  const auto base = testing::cot_instance(256, 10, 0.5, 1.0, rng);
  const auto ctx = testing::structure_instance(256, 10, 1.0, rng);
  std::vector<double> cot_h, csot_h;
  for (double eps : {1.0, 0.1, 0.01}) {
    const TransportProblem p(base.cost(), base.row_marginal(), base.col_marginal(), eps,
                             ConstraintKind::kCurriculumRowInequality);
    cot_h.push_back(oracle::mean_row_entropy(solve_cot_esi(p, iterations(1000)).coupling));
    csot_h.push_back(oracle::mean_row_entropy(solve_csot_gcg(p, ctx).coupling));
  }
  v.detail << "mean row entropy at eps 1, 0.1, 0.01: cot " << fmt(cot_h[0]) << " > " << fmt(cot_h[1])
           << " > " << fmt(cot_h[2]) << "; csot " << fmt(csot_h[0]) << " > " << fmt(csot_h[1])
           << " > " << fmt(csot_h[2]);
  v.require(cot_h[0] > cot_h[1] && cot_h[1] > cot_h[2], "cot entropy not strictly decreasing");
  v.require(csot_h[0] > csot_h[1] && csot_h[1] > csot_h[2], "csot entropy not strictly decreasing");
  return v;
}

// --------------------------------------------------------------------- 9
Verdict allocator_quality() {
  Verdict v;
  const std::size_t n = 5000, classes = 10, batch = 1024;
  const auto ds = apply_noise(generate_gaussian_mixture(n, classes, 16, 4.0, 2024),
                              {NoiseKind::kSymmetric, 0.5}, 2024);
  const auto preds = prototype_predictions(ds.features, ds.prototypes, 8.0);

  auto run = [&](double m, double kappa) {
    RelabelOptions opts;
    opts.kappa = kappa;
    const auto r = denoise_relabel_batched(preds, ds.features, ds.noisy_labels, m, batch, opts);
    std::size_t want = 0;
    for (std::size_t start = 0; start < n; start += batch)
      want += static_cast<std::size_t>(std::floor(m * static_cast<double>(std::min(batch, n - start)) + 1e-9));
    const auto got = static_cast<std::size_t>(std::count(r.outcome.selected.begin(), r.outcome.selected.end(), true));
    v.require(got == want, "selected " + std::to_string(got) + " != " + std::to_string(want));
    return evaluate(r.outcome, ds);
  };
  const auto csot_03 = run(0.3, 1.0), csot_10 = run(1.0, 1.0);
  const auto cot_03 = run(0.3, 0.0), cot_10 = run(1.0, 0.0);
  auto val = [](const std::optional<double>& x) { return x.value_or(NAN); };

  v.detail << "precision m=0.3 " << fmt(val(csot_03.clean_precision)) << " vs m=1 "
           << fmt(val(csot_10.clean_precision)) << "; corrected acc csot/cot m=0.3 "
           << fmt(val(csot_03.corrected_accuracy)) << "/" << fmt(val(cot_03.corrected_accuracy))
           << ", m=1 " << fmt(val(csot_10.corrected_accuracy)) << "/"
           << fmt(val(cot_10.corrected_accuracy));
  v.require(val(csot_03.clean_precision) >= val(csot_10.clean_precision), "precision ordering");
  v.require(val(csot_03.corrected_accuracy) >= val(cot_03.corrected_accuracy), "csot < cot at m=0.3");
  v.require(val(csot_10.corrected_accuracy) >= val(cot_10.corrected_accuracy), "csot < cot at m=1");
  return v;
}

// -------------------------------------------------------------------- 10
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::bit_cast<std::uint64_t>(a.values()[i]) != std::bit_cast<std::uint64_t>(b.values()[i]))
      return false;
  return true;
}

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CSOT_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

Verdict deterministic_cli_round_trip() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "csot_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto q = [&](const std::string& name) { return "\"" + (dir / name).string() + "\""; };

  auto rng = testing::make_rng(1010);
  const std::size_t b = 50, c = 10;
  const auto cost = testing::uniform_matrix(b, c, rng);
  const auto ctx = testing::structure_instance(b, c, 1.0, rng);
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < b; ++i) labels.push_back(oracle::argmax_rows(ctx.labels())[i]);
  save_matrix(dir / "cost.csmat", cost);
  save_matrix(dir / "pred.csmat", ctx.predictions());
  save_matrix(dir / "labels.csmat", ctx.labels());
  save_matrix(dir / "sim.csmat", ctx.similarity());
  save_labels(dir / "noisy.csv", labels);

  std::size_t compared = 0;
  for (const std::string algo : {"sinkhorn", "cot-dykstra", "cot-esi", "csot"}) {
    const std::string inputs = algo == "csot"
                                   ? "--pred " + q("pred.csmat") + " --labels " + q("labels.csmat") +
                                         " --sim " + q("sim.csmat")
                                   : "--cost " + q("cost.csmat");
    for (const std::string run : {"1", "2"}) {
      const int rc = cli("solve --algo " + algo + " " + inputs + " --deterministic --out " +
                         q(algo + run + ".csmat") + " --report " + q(algo + run + ".json"));
      v.require(rc == 0, algo + " exited " + std::to_string(rc));
    }
    v.require(slurp(dir / (algo + "1.csmat")) == slurp(dir / (algo + "2.csmat")), algo + " output bytes differ");
    v.require(slurp(dir / (algo + "1.json")) == slurp(dir / (algo + "2.json")), algo + " report bytes differ");

    const Marginal alpha = Marginal::uniform(b, 1.0);
    Solution direct = [&] {
      if (algo == "sinkhorn")
        return solve_sinkhorn(TransportProblem(cost, alpha, Marginal::uniform(c, 1.0), 0.1, ConstraintKind::kEquality));
      if (algo == "csot")
        return solve_csot_gcg(TransportProblem(cost_from_predictions(ctx.predictions()), alpha,
                                               Marginal::uniform(c, 0.3), 0.1,
                                               ConstraintKind::kCurriculumRowInequality),
                              ctx);
      const TransportProblem p(cost, alpha, Marginal::uniform(c, 0.3), 0.1,
                               ConstraintKind::kCurriculumRowInequality);
      return algo == "cot-esi" ? solve_cot_esi(p) : solve_cot_dykstra(p);
    }();
    v.require(bitwise_equal(load_matrix(dir / (algo + "1.csmat")), direct.coupling),
              algo + " file differs from in-process result");
    ++compared;
  }

  for (const std::string run : {"1", "2"}) {
    cli("relabel --pred " + q("pred.csmat") + " --sim " + q("sim.csmat") + " --noisy-labels " +
        q("noisy.csv") + " --deterministic --out " + q("outcome" + run + ".json"));
    cli("simulate --n 300 --classes 5 --dim 6 --noise sym:0.4 --seed 5 --out-dir " + q("sim" + run));
  }
  v.require(fs::exists(dir / "outcome1.json") && slurp(dir / "outcome1.json") == slurp(dir / "outcome2.json"),
            "relabel outcome bytes differ");
  for (const char* f : {"features.csmat", "predictions.csmat", "dataset.json", "noisy_labels.csv"})
    v.require(fs::exists(dir / "sim1" / f) && slurp(dir / "sim1" / f) == slurp(dir / "sim2" / f),
              std::string("simulate ") + f + " differs");
  v.detail << compared << " solvers x 2 runs byte-identical and bitwise equal to the library; relabel and simulate repeat exactly";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "scaling iteration matches Dykstra", scaling_iteration_matches_dykstra},
      {2, "equal masses reduce to Sinkhorn", equal_masses_reduce_to_sinkhorn},
      {3, "converged solves are feasible", converged_solves_are_feasible},
      {4, "regularizer gradient matches finite differences", gradient_matches_finite_differences},
      {5, "conditional gradient descends to stationarity", gcg_descends_to_stationarity},
      {6, "kappa = 0 reduces to curriculum OT", kappa_zero_reduces_to_curriculum},
      {7, "scaling iteration is faster at large sizes", scaling_iteration_is_faster},
      {8, "smaller epsilon gives sharper couplings", smaller_epsilon_is_sharper},
      {9, "allocator quality on the Gaussian mixture", allocator_quality},
      {10, "deterministic CLI runs are byte-identical", deterministic_cli_round_trip},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << v.detail.str()
              << std::endl;
    failures += v.pass ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
