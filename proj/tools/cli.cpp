#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csot/bench.hpp"
#include "csot/curriculum_ot.hpp"
#include "csot/error.hpp"
#include "csot/matrix_io.hpp"
#include "csot/primitives.hpp"
#include "csot/relabel.hpp"
#include "csot/serialize.hpp"
#include "csot/simlab.hpp"
#include "csot/sinkhorn.hpp"
#include "csot/structured.hpp"

namespace csot::cli {
namespace {

namespace fs = std::filesystem;

// Flag problems detected after CLI11 parsing.
struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  double epsilon = 0.1;
  double kappa = 1.0;
  double budget = 0.3;
  std::size_t inner_iters = 100;
  std::size_t outer_iters = 10;
  double tol = 1e-9;
  bool early_stop = false;
  bool deterministic = false;
  bool strict = false;
};

void add_solver_flags(CLI::App& cmd, SolverFlags& f) {
  cmd.add_option("--epsilon", f.epsilon, "Entropic regularization weight")->capture_default_str();
  cmd.add_option("--kappa", f.kappa, "Local coherence weight")->capture_default_str();
  cmd.add_option("--budget", f.budget, "Curriculum budget m (total coupling mass)")
      ->capture_default_str();
  cmd.add_option("--inner-iters", f.inner_iters, "Scaling iterations per solve")
      ->capture_default_str();
  cmd.add_option("--outer-iters", f.outer_iters, "Conditional gradient steps (csot only)")
      ->capture_default_str();
  cmd.add_option("--tol", f.tol, "Residual threshold for the converged flag")->capture_default_str();
  cmd.add_flag("--early-stop", f.early_stop, "Stop as soon as the residual threshold is met");
  cmd.add_flag("--deterministic", f.deterministic,
               "Single-threaded, timing fields omitted; outputs are byte-reproducible");
  cmd.add_flag("--strict", f.strict, "Exit with status 2 when a solve does not converge");
}

Execution execution_for(const SolverFlags& f) {
  return f.deterministic ? Execution{ExecutionMode::kDeterministic, 1}
                         : Execution{ExecutionMode::kParallel, 0};
}

GcgConfig gcg_for(const SolverFlags& f) {
  GcgConfig cfg;
  cfg.outer_iters = f.outer_iters;
  cfg.inner_iters = f.inner_iters;
  cfg.inner_tol = f.tol;
  cfg.early_stop = f.early_stop;
  cfg.exec = execution_for(f);
  return cfg;
}

void require_inputs_exist(std::initializer_list<const std::string*> paths) {
  for (const std::string* p : paths) {
    if (p->empty()) continue;
    require(fs::exists(*p), ErrorCode::kIo, "missing input file '" + *p + "'");
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string algo;
  std::string cost, pred, labels, sim, row_marginal, col_marginal;
  std::string out, report;
  SolverFlags flags;
};

int run_solve(const SolveArgs& a, std::ostream& out) {
  require_inputs_exist({&a.cost, &a.pred, &a.labels, &a.sim, &a.row_marginal, &a.col_marginal});
  if (a.cost.empty() && a.pred.empty()) throw FlagError("solve needs --cost or --pred");
  if (a.algo == "csot" && (a.pred.empty() || a.labels.empty() || a.sim.empty()))
    throw FlagError("--algo csot needs --pred, --labels and --sim");

  std::optional<DenseMatrix> predictions;
  if (!a.pred.empty()) predictions = load_matrix(a.pred);
  DenseMatrix cost = a.cost.empty() ? cost_from_predictions(*predictions) : load_matrix(a.cost);

  const bool equality = a.algo == "sinkhorn";
  Marginal alpha = a.row_marginal.empty() ? Marginal::uniform(cost.rows(), 1.0)
                                          : load_marginal(a.row_marginal);
  Marginal beta = a.col_marginal.empty()
                      ? Marginal::uniform(cost.cols(), equality ? 1.0 : a.flags.budget)
                      : load_marginal(a.col_marginal);
  const TransportProblem problem(std::move(cost), std::move(alpha), std::move(beta),
                                 a.flags.epsilon,
                                 equality ? ConstraintKind::kEquality
                                          : ConstraintKind::kCurriculumRowInequality);

  ScalingOptions scaling;
  scaling.max_iters = a.flags.inner_iters;
  scaling.tol = a.flags.tol;
  scaling.early_stop = a.flags.early_stop;
  scaling.exec = execution_for(a.flags);

  Solution sol = [&] {
    if (a.algo == "sinkhorn") return solve_sinkhorn(problem, scaling);
    if (a.algo == "cot-dykstra") return solve_cot_dykstra(problem, scaling);
    if (a.algo == "cot-esi") return solve_cot_esi(problem, scaling);
    const StructureContext ctx(load_matrix(a.sim), *predictions, load_matrix(a.labels),
                               a.flags.kappa);
    return solve_csot_gcg(problem, ctx, gcg_for(a.flags));
  }();

  save_matrix(a.out, sol.coupling);
  const std::string report = report_to_json(sol.report, !a.flags.deterministic);
  if (!a.report.empty()) write_text_atomic(a.report, report);
  out << sol.report.algo << ": iterations=" << sol.report.iterations
      << " converged=" << (sol.report.converged ? "true" : "false")
      << " objective=" << format_double(sol.report.objective_trace.back()) << "\n";
  return a.flags.strict && !sol.report.converged ? kExitNotConverged : kExitOk;
}

// -------------------------------------------------------------- relabel

struct RelabelArgs {
  std::string pred, sim, features, noisy_labels, true_labels, out;
  std::size_t batch_size = 1024;
  bool gate_corrupted = false;
  SolverFlags flags;
};

int run_relabel(const RelabelArgs& a, std::ostream& out) {
  require_inputs_exist({&a.pred, &a.sim, &a.features, &a.noisy_labels, &a.true_labels});
  if (a.sim.empty() == a.features.empty())
    throw FlagError("relabel needs exactly one of --sim or --features");

  const DenseMatrix predictions = load_matrix(a.pred);
  const std::vector<std::size_t> noisy = load_labels(a.noisy_labels);

  RelabelOptions options;
  options.epsilon = a.flags.epsilon;
  options.kappa = a.flags.kappa;
  options.gate_corrupted_by_selection = a.gate_corrupted;
  options.gcg = gcg_for(a.flags);

  const RelabelResult result =
      a.sim.empty()
          ? denoise_relabel_batched(predictions, load_matrix(a.features), noisy, a.flags.budget,
                                    a.batch_size, options)
          : denoise_relabel_batch(predictions, load_matrix(a.sim), noisy, a.flags.budget, options);

  std::optional<RelabelMetrics> metrics;
  if (!a.true_labels.empty()) {
    const auto truth = load_labels(a.true_labels);
    require(truth.size() == noisy.size(), ErrorCode::kDimensionMismatch,
            "true and noisy label counts differ");
    metrics = evaluate(result.outcome, truth, noisy, predictions.cols());
  }
  write_text_atomic(a.out, outcome_to_json(result, a.flags.budget, metrics, !a.flags.deterministic));

  const bool all_converged = std::all_of(result.reports.begin(), result.reports.end(),
                                         [](const SolveReport& r) { return r.converged; });
  out << "relabel: clean=" << result.outcome.clean_indices.size()
      << " corrupted=" << result.outcome.corrupted_indices.size() << " batches="
      << result.reports.size() << "\n";
  return a.flags.strict && !all_converged ? kExitNotConverged : kExitOk;
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
  std::size_t n = 0, classes = 0, dim = 0;
  double separation = 4.0;
  double temperature = 8.0;
  std::string noise = "sym:0";
  std::uint64_t seed = 0;
  std::string out_dir;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const NoiseSpec noise = parse_noise_spec(a.noise);
  SimDataset ds = apply_noise(
      generate_gaussian_mixture(a.n, a.classes, a.dim, a.separation, a.seed), noise, a.seed);
  const fs::path dir = a.out_dir;
  save_dataset(ds, dir);
  save_matrix(dir / "predictions.csmat", prototype_predictions(ds.features, ds.prototypes, a.temperature),
              MatrixFormat::kBinary);
  save_labels(dir / "true_labels.csv", ds.true_labels);
  save_labels(dir / "noisy_labels.csv", ds.noisy_labels);
  out << "simulate: n=" << a.n << " flips=" << ds.flip_count << " -> " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string sizes;
  std::size_t trials = 3;
  std::size_t iters = 100;
  double epsilon = 0.1;
  double budget = 0.5;
  std::uint64_t seed = 0;
  std::string out, json;
};

int run_bench(const BenchArgs& a, std::ostream& out) {
  BenchConfig cfg;
  cfg.sizes = parse_sizes(a.sizes);
  cfg.trials = a.trials;
  cfg.iters = a.iters;
  cfg.epsilon = a.epsilon;
  cfg.budget = a.budget;
  cfg.seed = a.seed;
  const auto results = run_benchmark(cfg);
  write_text_atomic(a.out, bench_to_csv(results));
  fs::path json = a.json.empty() ? fs::path(a.out).replace_extension(".json") : fs::path(a.json);
  write_text_atomic(json, bench_to_json(results));
  out << bench_to_csv(results);
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curriculum and structure-aware optimal transport toolkit", "csot"};
  app.require_subcommand(1, 1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one transport problem");
  solve_cmd->add_option("--algo", solve.algo, "Solver")
      ->required()
      ->check(CLI::IsMember({"sinkhorn", "cot-dykstra", "cot-esi", "csot"}));
  solve_cmd->add_option("--cost", solve.cost, "Cost matrix (default: -log of --pred)");
  solve_cmd->add_option("--pred", solve.pred, "Prediction matrix P");
  solve_cmd->add_option("--labels", solve.labels, "One-hot label matrix L (csot)");
  solve_cmd->add_option("--sim", solve.sim, "Similarity matrix S (csot)");
  solve_cmd->add_option("--row-marginal", solve.row_marginal, "alpha (default: uniform 1/rows)");
  solve_cmd->add_option("--col-marginal", solve.col_marginal,
                        "beta (default: uniform budget/cols, 1/cols for sinkhorn)");
  solve_cmd->add_option("--out", solve.out, "Output coupling (.csv or binary)")->required();
  solve_cmd->add_option("--report", solve.report, "Solve report JSON");
  add_solver_flags(*solve_cmd, solve.flags);

  RelabelArgs relabel;
  auto* relabel_cmd = app.add_subcommand("relabel", "Denoise and relabel a batch");
  relabel_cmd->add_option("--pred", relabel.pred, "Prediction matrix P")->required();
  relabel_cmd->add_option("--sim", relabel.sim, "Similarity matrix S (single batch)");
  relabel_cmd->add_option("--features", relabel.features,
                          "Feature matrix; cosine similarity is computed per batch");
  relabel_cmd->add_option("--batch-size", relabel.batch_size, "Batch size with --features")
      ->capture_default_str();
  relabel_cmd->add_option("--noisy-labels", relabel.noisy_labels, "Noisy labels (CSV)")->required();
  relabel_cmd->add_option("--true-labels", relabel.true_labels,
                          "Ground-truth labels (CSV); adds metrics to the outcome");
  relabel_cmd->add_flag("--gate-corrupted", relabel.gate_corrupted,
                        "Only selected samples may enter the corrupted set");
  relabel_cmd->add_option("--out", relabel.out, "Outcome JSON")->required();
  add_solver_flags(*relabel_cmd, relabel.flags);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a noisy Gaussian-mixture dataset");
  sim_cmd->add_option("--n", sim.n, "Samples")->required();
  sim_cmd->add_option("--classes", sim.classes, "Classes")->required();
  sim_cmd->add_option("--dim", sim.dim, "Feature dimension")->required();
  sim_cmd->add_option("--separation", sim.separation, "Prototype distance")->capture_default_str();
  sim_cmd->add_option("--temperature", sim.temperature, "Softmax temperature of the predictions")
      ->capture_default_str();
  sim_cmd->add_option("--noise", sim.noise, "sym:RATIO or asym:RATIO")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  sim_cmd->add_option("--out-dir", sim.out_dir, "Output directory")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time vanilla Dykstra against the scaling iteration");
  bench_cmd->add_option("--sizes", bench.sizes, "RxC[,RxC...]")->required();
  bench_cmd->add_option("--trials", bench.trials, "Timed runs per solver")->capture_default_str();
  bench_cmd->add_option("--iters", bench.iters, "Iterations per solve")->capture_default_str();
  bench_cmd->add_option("--epsilon", bench.epsilon, "Entropic weight")->capture_default_str();
  bench_cmd->add_option("--budget", bench.budget, "Curriculum budget m")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV output")->required();
  bench_cmd->add_option("--json", bench.json, "JSON mirror (default: --out with .json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "E_FLAG: " << one_line(e.what()) << "\n";
    return kExitInvalid;
  }

  try {
    if (*solve_cmd) return run_solve(solve, out);
    if (*relabel_cmd) return run_relabel(relabel, out);
    if (*sim_cmd) return run_simulate(sim, out);
    return run_bench(bench, out);
  } catch (const FlagError& e) {
    err << "E_FLAG: " << one_line(e.what()) << "\n";
  } catch (const Error& e) {
    err << error_tag(e.code()) << ": " << one_line(e.what()) << "\n";
  } catch (const std::exception& e) {
    err << "E_INTERNAL: " << one_line(e.what()) << "\n";
  }
  return kExitInvalid;
}

}  // namespace csot::cli
