#include "csot/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "csot/curriculum_ot.hpp"
#include "csot/error.hpp"

namespace csot {

std::string to_string(BenchAlgo algo) { return algo == BenchAlgo::kVda ? "vda" : "esi"; }

TransportProblem random_cot_instance(std::size_t rows, std::size_t cols, double budget,
                                     double epsilon, std::uint64_t seed) {
  require(budget > 0.0 && budget <= 1.0, ErrorCode::kInvalidInput, "budget must lie in (0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DenseMatrix cost(rows, cols);
  for (double& c : cost.values()) c = unit(rng);
  return TransportProblem(std::move(cost), Marginal::uniform(rows, 1.0),
                          Marginal::uniform(cols, budget), epsilon,
                          ConstraintKind::kCurriculumRowInequality);
}

std::vector<BenchResult> run_benchmark(const BenchConfig& config) {
  require(config.trials >= 3, ErrorCode::kInvalidInput, "benchmark needs at least 3 trials");
  require(!config.sizes.empty(), ErrorCode::kInvalidInput, "benchmark needs at least one size");

  ScalingOptions options;
  options.max_iters = config.iters;
  options.exec = Execution{ExecutionMode::kDeterministic, 1};

  std::vector<BenchResult> results;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    const auto [rows, cols] = config.sizes[s];
    const TransportProblem problem =
        random_cot_instance(rows, cols, config.budget, config.epsilon, config.seed + s);

    // Warm-up doubles as the correctness gate.
    const Solution vda = solve_cot_dykstra(problem, options);
    const Solution esi = solve_cot_esi(problem, options);
    const double gap = max_abs_diff(vda.coupling, esi.coupling);
    require(gap <= config.agreement_tol, ErrorCode::kInternal,
            "benchmark correctness gate failed at " + std::to_string(rows) + "x" +
                std::to_string(cols) + ": solvers differ by " + std::to_string(gap));

    for (BenchAlgo algo : {BenchAlgo::kVda, BenchAlgo::kEsi}) {
      std::vector<double> times;
      for (std::size_t t = 0; t < config.trials; ++t) {
        const auto start = std::chrono::steady_clock::now();
        const Solution sol = algo == BenchAlgo::kVda ? solve_cot_dykstra(problem, options)
                                                     : solve_cot_esi(problem, options);
        times.push_back(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count());
        (void)sol;
      }
      std::sort(times.begin(), times.end());
      const std::size_t mid = times.size() / 2;
      const double median =
          times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
      results.push_back(BenchResult{rows, cols, algo, config.trials, median, times.front(),
                                    times.back()});
    }
  }
  return results;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    std::size_t r = 0, c = 0, used_r = 0, used_c = 0;
    bool ok = x != std::string::npos && x > 0 && x + 1 < item.size();
    if (ok) {
      try {
        r = std::stoul(item.substr(0, x), &used_r);
        c = std::stoul(item.substr(x + 1), &used_c);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    ok = ok && used_r == x && used_c == item.size() - x - 1 && r > 0 && c > 0;
    require(ok, ErrorCode::kInvalidInput, "bad size '" + item + "', expected RxC");
    sizes.emplace_back(r, c);
  }
  require(!sizes.empty(), ErrorCode::kInvalidInput, "no sizes given");
  return sizes;
}

}  // namespace csot
