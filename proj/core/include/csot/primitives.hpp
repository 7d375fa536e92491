#pragma once

#include <cstddef>
#include <span>

#include "csot/matrix.hpp"

namespace csot {

inline constexpr double kDefaultPredictionFloor = 1e-30;

// C_ij = -log(max(P_ij, floor)).
DenseMatrix cost_from_predictions(const DenseMatrix& predictions,
                                  double floor = kDefaultPredictionFloor);

// Pairwise cosine similarity of feature rows. Exactly symmetric, clamped to
// [-1, 1]. Throws on a zero-norm row.
DenseMatrix cosine_similarity(const DenseMatrix& features);

DenseMatrix one_hot(std::span<const std::size_t> labels, std::size_t num_classes);

}  // namespace csot
