#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "csot/matrix.hpp"
#include "csot/primitives.hpp"
#include "csot/problem.hpp"

namespace csot::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline DenseMatrix uniform_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                  double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = dist(rng);
  return DenseMatrix(rows, cols, std::move(v));
}

inline std::vector<double> uniform_vector(std::size_t n, std::mt19937_64& rng, double lo,
                                          double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// Softmax of Gaussian logits; every row is strictly positive and sums to 1.
inline DenseMatrix simplex_rows(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                double spread = 2.0) {
  std::normal_distribution<double> dist(0.0, spread);
  DenseMatrix p(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      p(i, j) = std::exp(dist(rng));
      total += p(i, j);
    }
    for (std::size_t j = 0; j < cols; ++j) p(i, j) /= total;
  }
  return p;
}

inline std::vector<std::size_t> random_labels(std::size_t n, std::size_t classes,
                                              std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, classes - 1);
  std::vector<std::size_t> out(n);
  for (auto& y : out) y = dist(rng);
  return out;
}

// Curriculum instance with uniform [0, 1) cost, alpha = 1/B and beta = m/C.
inline TransportProblem cot_instance(std::size_t rows, std::size_t cols, double m,
                                     double epsilon, std::mt19937_64& rng) {
  return TransportProblem(uniform_matrix(rows, cols, rng), Marginal::uniform(rows, 1.0),
                          Marginal::uniform(cols, m), epsilon,
                          ConstraintKind::kCurriculumRowInequality);
}

inline TransportProblem balanced_instance(std::size_t rows, std::size_t cols, double epsilon,
                                          std::mt19937_64& rng) {
  return TransportProblem(uniform_matrix(rows, cols, rng), Marginal::uniform(rows, 1.0),
                          Marginal::uniform(cols, 1.0), epsilon, ConstraintKind::kEquality);
}

// Similarity from clustered features so that neighbours share labels.
inline StructureContext structure_instance(std::size_t rows, std::size_t cols, double kappa,
                                           std::mt19937_64& rng) {
  const auto labels = random_labels(rows, cols, rng);
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::size_t dim = cols + 2;
  DenseMatrix features(rows, dim);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t d = 0; d < dim; ++d) features(i, d) = noise(rng);
    features(i, labels[i]) += 3.0;
  }
  return StructureContext(cosine_similarity(features), simplex_rows(rows, cols, rng),
                          one_hot(labels, cols), kappa);
}

}  // namespace csot::testing
