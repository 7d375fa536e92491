#include "csot/relabel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "csot/error.hpp"

namespace csot {

double budget(std::size_t t, const BudgetSchedule& schedule) {
  require(schedule.t_sup >= 2, ErrorCode::kInvalidInput, "budget schedule needs t_sup >= 2");
  require(t >= 1, ErrorCode::kInvalidInput, "budget epoch t starts at 1");
  require(schedule.m0 > 0.0 && schedule.m0 <= 1.0, ErrorCode::kInvalidInput,
          "initial budget m0 must lie in (0, 1]");
  const double ramp = static_cast<double>(t - 1) / static_cast<double>(schedule.t_sup - 1);
  return std::min(1.0, schedule.m0 + ramp);
}

std::vector<std::size_t> pseudo_labels(const DenseMatrix& q) {
  std::vector<std::size_t> out(q.rows());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    const auto r = q.row(i);
    out[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

std::vector<double> confidence_weights(const DenseMatrix& q, double m, std::size_t num_classes) {
  require(m > 0.0, ErrorCode::kInvalidInput, "budget m must be positive");
  require(num_classes == q.cols(), ErrorCode::kDimensionMismatch,
          "num_classes does not match the coupling");
  const double column_mass = m / static_cast<double>(num_classes);
  const auto labels = pseudo_labels(q);
  std::vector<double> w(q.rows());
  for (std::size_t i = 0; i < q.rows(); ++i)
    w[i] = std::clamp(q(i, labels[i]) / column_mass, 0.0, 1.0);
  return w;
}

namespace {
std::size_t selection_count(double m, std::size_t n) {
  // floor(m * n), immune to products like 0.29 * 100 = 28.999999999999996
  const double raw = m * static_cast<double>(n);
  const double nearest = std::round(raw);
  const double k = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw) ? nearest : std::floor(raw);
  return std::min(n, static_cast<std::size_t>(k));
}
}  // namespace

std::vector<bool> select(std::span<const double> weights, double m) {
  require(!weights.empty(), ErrorCode::kInvalidInput, "select needs at least one weight");
  require(m > 0.0 && m <= 1.0, ErrorCode::kInvalidInput, "budget m must lie in (0, 1]");
  const std::size_t k = selection_count(m, weights.size());
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  std::vector<bool> mask(weights.size(), false);
  for (std::size_t r = 0; r < k; ++r) mask[order[r]] = true;
  return mask;
}

DatasetSplit split(std::span<const std::size_t> noisy_labels,
                   std::span<const std::size_t> pseudo, const std::vector<bool>& selected,
                   bool gate_corrupted_by_selection) {
  require(noisy_labels.size() == pseudo.size() && pseudo.size() == selected.size(),
          ErrorCode::kDimensionMismatch, "split inputs must share one length");
  DatasetSplit out;
  for (std::size_t i = 0; i < pseudo.size(); ++i) {
    if (pseudo[i] == noisy_labels[i]) {
      if (selected[i]) out.clean.push_back(i);
    } else if (!gate_corrupted_by_selection || selected[i]) {
      out.corrupted.push_back(i);
    }
  }
  return out;
}

RelabelResult denoise_relabel_batch(const DenseMatrix& predictions, const DenseMatrix& similarity,
                                    std::span<const std::size_t> noisy_labels, double m,
                                    const RelabelOptions& options) {
  const std::size_t b = predictions.rows();
  const std::size_t c = predictions.cols();
  require(noisy_labels.size() == b, ErrorCode::kDimensionMismatch,
          "noisy label count " + std::to_string(noisy_labels.size()) +
              " does not match prediction rows " + std::to_string(b));
  require(m > 0.0 && m <= 1.0, ErrorCode::kInvalidInput, "budget m must lie in (0, 1]");

  StructureContext ctx(similarity, predictions, one_hot(noisy_labels, c), options.kappa);
  TransportProblem problem(cost_from_predictions(predictions, options.prediction_floor),
                           Marginal::uniform(b, 1.0), Marginal::uniform(c, m), options.epsilon,
                           ConstraintKind::kCurriculumRowInequality);
  Solution sol = solve_csot_gcg(problem, ctx, options.gcg);

  RelabelResult result;
  RelabelOutcome& out = result.outcome;
  out.pseudo_labels = pseudo_labels(sol.coupling);
  out.weights = confidence_weights(sol.coupling, m, c);
  out.selected = select(out.weights, m);
  DatasetSplit parts =
      split(noisy_labels, out.pseudo_labels, out.selected, options.gate_corrupted_by_selection);
  out.clean_indices = std::move(parts.clean);
  out.corrupted_indices = std::move(parts.corrupted);
  result.reports.push_back(std::move(sol.report));
  return result;
}

RelabelResult denoise_relabel_batched(const DenseMatrix& predictions, const DenseMatrix& features,
                                      std::span<const std::size_t> noisy_labels, double m,
                                      std::size_t batch_size, const RelabelOptions& options) {
  const std::size_t n = predictions.rows();
  require(batch_size > 0, ErrorCode::kInvalidInput, "batch_size must be positive");
  require(features.rows() == n && noisy_labels.size() == n, ErrorCode::kDimensionMismatch,
          "predictions, features and labels must describe the same samples");

  auto slice = [](const DenseMatrix& src, std::size_t begin, std::size_t end) {
    const auto first = src.values().begin() + static_cast<std::ptrdiff_t>(begin * src.cols());
    const auto last = src.values().begin() + static_cast<std::ptrdiff_t>(end * src.cols());
    return DenseMatrix(end - begin, src.cols(), std::vector<double>(first, last));
  };

  RelabelResult total;
  RelabelOutcome& out = total.outcome;
  for (std::size_t begin = 0; begin < n; begin += batch_size) {
    const std::size_t end = std::min(n, begin + batch_size);
    const DenseMatrix p = slice(predictions, begin, end);
    const DenseMatrix s = cosine_similarity(slice(features, begin, end));
    RelabelResult part =
        denoise_relabel_batch(p, s, noisy_labels.subspan(begin, end - begin), m, options);
    const RelabelOutcome& po = part.outcome;
    out.pseudo_labels.insert(out.pseudo_labels.end(), po.pseudo_labels.begin(), po.pseudo_labels.end());
    out.weights.insert(out.weights.end(), po.weights.begin(), po.weights.end());
    out.selected.insert(out.selected.end(), po.selected.begin(), po.selected.end());
    for (std::size_t i : po.clean_indices) out.clean_indices.push_back(begin + i);
    for (std::size_t i : po.corrupted_indices) out.corrupted_indices.push_back(begin + i);
    total.reports.push_back(std::move(part.reports.front()));
  }
  return total;
}

}  // namespace csot
