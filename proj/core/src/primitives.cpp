#include "csot/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "csot/error.hpp"

namespace csot {

DenseMatrix cost_from_predictions(const DenseMatrix& predictions, double floor) {
  require(floor > 0.0 && floor < 1.0, ErrorCode::kInvalidInput,
          "prediction floor must lie in (0, 1)");
  DenseMatrix cost(predictions.rows(), predictions.cols());
  const auto p = predictions.values();
  auto c = cost.values();
  for (std::size_t k = 0; k < p.size(); ++k) {
    require(p[k] >= 0.0, ErrorCode::kInvalidInput, "predictions must be nonnegative");
    // max(0, .) absorbs probabilities a rounding error above 1.
    c[k] = std::max(0.0, -std::log(std::max(p[k], floor)));
  }
  return cost;
}

DenseMatrix cosine_similarity(const DenseMatrix& features) {
  const std::size_t n = features.rows();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double x : features.row(i)) s += x * x;
    require(s > 0.0, ErrorCode::kInvalidInput,
            "feature row " + std::to_string(i) + " has zero norm");
    norms[i] = std::sqrt(s);
  }
  DenseMatrix sim(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = features.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const auto xj = features.row(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) dot += xi[k] * xj[k];
      const double s = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
      sim(i, j) = s;
      sim(j, i) = s;
    }
  }
  return sim;
}

DenseMatrix one_hot(std::span<const std::size_t> labels, std::size_t num_classes) {
  require(!labels.empty(), ErrorCode::kInvalidInput, "one_hot needs at least one label");
  require(num_classes > 0, ErrorCode::kInvalidInput, "one_hot needs at least one class");
  DenseMatrix out(labels.size(), num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] < num_classes, ErrorCode::kInvalidInput,
            "label " + std::to_string(labels[i]) + " at index " + std::to_string(i) +
                " is out of range for " + std::to_string(num_classes) + " classes");
    out(i, labels[i]) = 1.0;
  }
  return out;
}

}  // namespace csot
