#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csot/matrix.hpp"
#include "csot/primitives.hpp"
#include "csot/problem.hpp"
#include "csot/structured.hpp"

namespace csot {

// Linear curriculum ramp m(t) = min(1, m0 + (t - 1) / (t_sup - 1)).
struct BudgetSchedule {
  double m0 = 0.3;
  std::size_t t_sup = 250;
};

double budget(std::size_t t, const BudgetSchedule& schedule);

// Row-wise argmax, ties to the lowest column.
std::vector<std::size_t> pseudo_labels(const DenseMatrix& q);

// w_i = Q[i, argmax_i] * C / m, clamped to [0, 1].
std::vector<double> confidence_weights(const DenseMatrix& q, double m, std::size_t num_classes);

// Marks the floor(m * B) largest weights; ties go to the lower index.
std::vector<bool> select(std::span<const double> weights, double m);

struct DatasetSplit {
  std::vector<std::size_t> clean;      // y_hat == y and selected
  std::vector<std::size_t> corrupted;  // y_hat != y (optionally also selected)
};

DatasetSplit split(std::span<const std::size_t> noisy_labels,
                   std::span<const std::size_t> pseudo, const std::vector<bool>& selected,
                   bool gate_corrupted_by_selection = false);

struct RelabelOutcome {
  std::vector<std::size_t> pseudo_labels;
  std::vector<double> weights;
  std::vector<bool> selected;
  std::vector<std::size_t> clean_indices;
  std::vector<std::size_t> corrupted_indices;
};

struct RelabelOptions {
  double epsilon = 0.1;
  double kappa = 1.0;
  double prediction_floor = kDefaultPredictionFloor;
  bool gate_corrupted_by_selection = false;
  GcgConfig gcg;
};

struct RelabelResult {
  RelabelOutcome outcome;
  std::vector<SolveReport> reports;  // one per solved batch
};

// One batch: C = -log P, alpha = 1/B, beta = m/C, CSOT by GCG, then
// pseudo-labels, weights, top-k selection and the clean/corrupted split.
RelabelResult denoise_relabel_batch(const DenseMatrix& predictions, const DenseMatrix& similarity,
                                    std::span<const std::size_t> noisy_labels, double m,
                                    const RelabelOptions& options = {});

// Runs denoise_relabel_batch over consecutive batches of `batch_size`
// samples (similarity from feature cosine per batch) and stitches the
// outcome back together with global indices.
RelabelResult denoise_relabel_batched(const DenseMatrix& predictions, const DenseMatrix& features,
                                      std::span<const std::size_t> noisy_labels, double m,
                                      std::size_t batch_size, const RelabelOptions& options = {});

}  // namespace csot
