#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "csot/problem.hpp"

namespace csot {

enum class BenchAlgo { kVda, kEsi };  // vanilla Dykstra, efficient scaling iteration

std::string to_string(BenchAlgo algo);

struct BenchResult {
  std::size_t rows = 0;
  std::size_t cols = 0;
  BenchAlgo algo = BenchAlgo::kEsi;
  std::size_t trials = 0;
  double median_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
};

struct BenchConfig {
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  std::size_t trials = 3;
  std::size_t iters = 100;
  double epsilon = 0.1;
  double budget = 0.5;
  std::uint64_t seed = 0;
  // Both solvers must agree elementwise to this before any timing counts.
  double agreement_tol = 1e-6;
};

// Uniform [0, 1) cost, alpha = 1/rows, beta = budget/cols.
TransportProblem random_cot_instance(std::size_t rows, std::size_t cols, double budget,
                                     double epsilon, std::uint64_t seed);

// Per size: one discarded warm-up plus `trials` timed runs of each solver
// on the same instance, single-threaded. Throws kInternal if the two
// solvers disagree.
std::vector<BenchResult> run_benchmark(const BenchConfig& config);

// Parses "RxC[,RxC...]".
std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& text);

}  // namespace csot
