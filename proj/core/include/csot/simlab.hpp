#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csot/matrix.hpp"
#include "csot/relabel.hpp"

namespace csot {

enum class NoiseKind { kSymmetric, kAsymmetric };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kSymmetric;
  double ratio = 0.0;
};

// Parses "sym:0.5" / "asym:0.4".
NoiseSpec parse_noise_spec(const std::string& text);
std::string to_string(NoiseKind kind);

struct SimDataset {
  DenseMatrix features;    // N x dim
  DenseMatrix prototypes;  // num_classes x dim
  std::vector<std::size_t> true_labels;
  std::vector<std::size_t> noisy_labels;
  std::size_t num_classes = 0;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  std::size_t flip_count = 0;  // positions where noisy != true
};

// num_classes points of a regular simplex with pairwise distance
// `separation`, embedded in the first num_classes - 1 of `dim` coordinates.
DenseMatrix simplex_prototypes(std::size_t num_classes, std::size_t dim, double separation);

// Balanced labels (shuffled), unit-variance Gaussian features around the
// true class prototype. Noise-free: noisy_labels == true_labels.
SimDataset generate_gaussian_mixture(std::size_t n, std::size_t num_classes, std::size_t dim,
                                     double separation, std::uint64_t seed);

// floor(ratio * N) positions drawn without replacement get a label drawn
// uniformly over all classes (the original may be redrawn).
std::vector<std::size_t> inject_symmetric_noise(std::span<const std::size_t> labels, double ratio,
                                                std::size_t num_classes, std::uint64_t seed);

// Each label independently becomes mapping[label] with probability ratio.
std::vector<std::size_t> inject_asymmetric_noise(std::span<const std::size_t> labels, double ratio,
                                                 std::span<const std::size_t> mapping,
                                                 std::uint64_t seed);

// c -> (c + 1) mod C
std::vector<std::size_t> circular_shift_mapping(std::size_t num_classes);

// Returns `dataset` with noisy_labels, noise and flip_count filled in.
SimDataset apply_noise(SimDataset dataset, const NoiseSpec& noise, std::uint64_t seed);

// Row i: softmax over c of -||x_i - mu_c||^2 / temperature.
DenseMatrix prototype_predictions(const DenseMatrix& features, const DenseMatrix& prototypes,
                                  double temperature);

std::vector<std::size_t> nearest_prototype(const DenseMatrix& features,
                                           const DenseMatrix& prototypes);

struct RelabelMetrics {
  std::optional<double> clean_precision;     // empty when D_clean is empty
  std::optional<double> clean_recall;        // empty when no sample is truly clean
  std::optional<double> corrected_accuracy;  // empty when D_corrupted is empty
  std::vector<std::vector<std::size_t>> confusion;  // [true][pseudo]
};

RelabelMetrics evaluate(const RelabelOutcome& outcome, std::span<const std::size_t> true_labels,
                        std::span<const std::size_t> noisy_labels, std::size_t num_classes);
RelabelMetrics evaluate(const RelabelOutcome& outcome, const SimDataset& dataset);

// features.csmat + prototypes.csmat + dataset.json sidecar.
void save_dataset(const SimDataset& dataset, const std::filesystem::path& dir);
SimDataset load_dataset(const std::filesystem::path& dir);

}  // namespace csot
