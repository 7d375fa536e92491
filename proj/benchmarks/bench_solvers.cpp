#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "csot/bench.hpp"
#include "csot/curriculum_ot.hpp"
#include "csot/primitives.hpp"
#include "csot/sinkhorn.hpp"
#include "csot/structured.hpp"

namespace {

csot::ScalingOptions fixed_iterations() {
  csot::ScalingOptions o;
  o.max_iters = 100;
  return o;
}

void BM_Sinkhorn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = csot::random_cot_instance(n, 10, 1.0, 0.1, 1).with_kind(csot::ConstraintKind::kEquality);
  for (auto _ : state) benchmark::DoNotOptimize(csot::solve_sinkhorn(p, fixed_iterations()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sinkhorn)->RangeMultiplier(4)->Range(64, 4096)->Complexity()->Unit(benchmark::kMillisecond);

void BM_CotEsi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = csot::random_cot_instance(n, state.range(1), 0.5, 0.1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(csot::solve_cot_esi(p, fixed_iterations()));
}
BENCHMARK(BM_CotEsi)->Args({1024, 10})->Args({1024, 100})->Args({500, 500})->Unit(benchmark::kMillisecond);

void BM_CotDykstra(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = csot::random_cot_instance(n, state.range(1), 0.5, 0.1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(csot::solve_cot_dykstra(p, fixed_iterations()));
}
BENCHMARK(BM_CotDykstra)->Args({1024, 10})->Args({1024, 100})->Args({500, 500})->Unit(benchmark::kMillisecond);

void BM_CsotGcg(benchmark::State& state) {
  const auto b = static_cast<std::size_t>(state.range(0));
  const std::size_t c = 10;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  csot::DenseMatrix features(b, 16), logits(b, c);
  for (double& x : features.values()) x = gauss(rng);
  for (double& x : logits.values()) x = gauss(rng);
  csot::DenseMatrix preds(b, c);
  std::vector<std::size_t> labels(b);
  for (std::size_t i = 0; i < b; ++i) {
    double total = 0;
    for (std::size_t k = 0; k < c; ++k) total += preds(i, k) = std::exp(logits(i, k));
    for (std::size_t k = 0; k < c; ++k) preds(i, k) /= total;
    labels[i] = i % c;
  }
  const csot::StructureContext ctx(csot::cosine_similarity(features), preds, csot::one_hot(labels, c), 1.0);
  const csot::TransportProblem p(csot::cost_from_predictions(preds), csot::Marginal::uniform(b, 1.0),
                                 csot::Marginal::uniform(c, 0.5), 0.1,
                                 csot::ConstraintKind::kCurriculumRowInequality);
  for (auto _ : state) benchmark::DoNotOptimize(csot::solve_csot_gcg(p, ctx));
}
BENCHMARK(BM_CsotGcg)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_CosineSimilarity(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  csot::DenseMatrix x(static_cast<std::size_t>(state.range(0)), 128);
  for (double& v : x.values()) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(csot::cosine_similarity(x));
}
BENCHMARK(BM_CosineSimilarity)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
