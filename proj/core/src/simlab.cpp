#include "csot/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "csot/error.hpp"
#include "csot/matrix_io.hpp"
#include "json.hpp"

namespace csot {
namespace {

// Independent stream per (seed, purpose).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return std::mt19937_64(seq);
}

constexpr std::uint32_t kStreamLabels = 1;
constexpr std::uint32_t kStreamFeatures = 2;
constexpr std::uint32_t kStreamSymmetric = 3;
constexpr std::uint32_t kStreamAsymmetric = 4;

std::size_t count_flips(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

void require_ratio(double ratio) {
  require(ratio >= 0.0 && ratio <= 1.0, ErrorCode::kInvalidInput, "noise ratio must lie in [0, 1]");
}

}  // namespace

NoiseSpec parse_noise_spec(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorCode::kInvalidInput,
          "noise spec must look like sym:RATIO or asym:RATIO, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  NoiseSpec spec;
  if (kind == "sym")
    spec.kind = NoiseKind::kSymmetric;
  else if (kind == "asym")
    spec.kind = NoiseKind::kAsymmetric;
  else
    throw_error(ErrorCode::kInvalidInput, "unknown noise kind '" + kind + "'");
  std::size_t used = 0;
  try {
    spec.ratio = std::stod(text.substr(colon + 1), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used > 0 && used == text.size() - colon - 1, ErrorCode::kInvalidInput,
          "noise ratio in '" + text + "' is not a number");
  require_ratio(spec.ratio);
  return spec;
}

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::kSymmetric ? "sym" : "asym";
}

DenseMatrix simplex_prototypes(std::size_t num_classes, std::size_t dim, double separation) {
  require(num_classes >= 1, ErrorCode::kInvalidInput, "need at least one class");
  require(dim >= 1 && dim + 1 >= num_classes, ErrorCode::kInvalidInput,
          "dim must be at least num_classes - 1 for the simplex embedding");
  require(separation > 0.0, ErrorCode::kInvalidInput, "separation must be positive");
  // Rows of the Helmert basis of {x : sum x = 0}; e_c projected onto it keeps
  // the pairwise distance sqrt(2).
  DenseMatrix protos(num_classes, dim);
  const double scale = separation / std::sqrt(2.0);
  for (std::size_t k = 1; k < num_classes; ++k) {
    const double norm = std::sqrt(static_cast<double>(k * (k + 1)));
    for (std::size_t c = 0; c < k; ++c) protos(c, k - 1) = scale / norm;
    protos(k, k - 1) = -scale * static_cast<double>(k) / norm;
  }
  return protos;
}

SimDataset generate_gaussian_mixture(std::size_t n, std::size_t num_classes, std::size_t dim,
                                     double separation, std::uint64_t seed) {
  require(num_classes >= 1 && n >= num_classes, ErrorCode::kInvalidInput,
          "need n >= num_classes >= 1");
  DenseMatrix protos = simplex_prototypes(num_classes, dim, separation);

  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % num_classes;
  auto label_rng = make_rng(seed, kStreamLabels);
  std::shuffle(labels.begin(), labels.end(), label_rng);

  auto feature_rng = make_rng(seed, kStreamFeatures);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseMatrix features(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto mu = protos.row(labels[i]);
    auto x = features.row(i);
    for (std::size_t d = 0; d < dim; ++d) x[d] = mu[d] + gauss(feature_rng);
  }

  SimDataset ds{std::move(features), std::move(protos), labels, labels, num_classes,
                NoiseSpec{}, seed, 0};
  return ds;
}

std::vector<std::size_t> inject_symmetric_noise(std::span<const std::size_t> labels, double ratio,
                                                std::size_t num_classes, std::uint64_t seed) {
  require_ratio(ratio);
  require(num_classes >= 1, ErrorCode::kInvalidInput, "need at least one class");
  std::vector<std::size_t> out(labels.begin(), labels.end());
  const std::size_t count = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(out.size())));
  if (count == 0) return out;

  auto rng = make_rng(seed, kStreamSymmetric);
  // Partial Fisher-Yates: the first `count` entries of `order` are a uniform
  // sample without replacement.
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, order.size() - 1);
    std::swap(order[k], order[pick(rng)]);
  }
  std::uniform_int_distribution<std::size_t> label(0, num_classes - 1);
  for (std::size_t k = 0; k < count; ++k) out[order[k]] = label(rng);
  return out;
}

std::vector<std::size_t> inject_asymmetric_noise(std::span<const std::size_t> labels, double ratio,
                                                 std::span<const std::size_t> mapping,
                                                 std::uint64_t seed) {
  require_ratio(ratio);
  for (std::size_t c = 0; c < mapping.size(); ++c)
    require(mapping[c] < mapping.size(), ErrorCode::kInvalidInput,
            "noise mapping sends class " + std::to_string(c) + " out of range");
  std::vector<std::size_t> out(labels.begin(), labels.end());
  auto rng = make_rng(seed, kStreamAsymmetric);
  std::bernoulli_distribution flip(ratio);
  for (auto& y : out) {
    require(y < mapping.size(), ErrorCode::kInvalidInput, "label outside the noise mapping");
    if (flip(rng)) y = mapping[y];
  }
  return out;
}

std::vector<std::size_t> circular_shift_mapping(std::size_t num_classes) {
  std::vector<std::size_t> m(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) m[c] = (c + 1) % num_classes;
  return m;
}

SimDataset apply_noise(SimDataset dataset, const NoiseSpec& noise, std::uint64_t seed) {
  if (noise.kind == NoiseKind::kSymmetric) {
    dataset.noisy_labels =
        inject_symmetric_noise(dataset.true_labels, noise.ratio, dataset.num_classes, seed);
  } else {
    const auto mapping = circular_shift_mapping(dataset.num_classes);
    dataset.noisy_labels = inject_asymmetric_noise(dataset.true_labels, noise.ratio, mapping, seed);
  }
  dataset.noise = noise;
  dataset.flip_count = count_flips(dataset.true_labels, dataset.noisy_labels);
  return dataset;
}

DenseMatrix prototype_predictions(const DenseMatrix& features, const DenseMatrix& prototypes,
                                  double temperature) {
  require(temperature > 0.0, ErrorCode::kInvalidInput, "temperature must be positive");
  require(features.cols() == prototypes.cols(), ErrorCode::kDimensionMismatch,
          "features and prototypes differ in dimension");
  DenseMatrix out(features.rows(), prototypes.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto x = features.row(i);
    auto r = out.row(i);
    for (std::size_t c = 0; c < prototypes.rows(); ++c) {
      const auto mu = prototypes.row(c);
      double d2 = 0.0;
      for (std::size_t d = 0; d < x.size(); ++d) d2 += (x[d] - mu[d]) * (x[d] - mu[d]);
      r[c] = -d2 / temperature;
    }
    const double peak = *std::max_element(r.begin(), r.end());
    double z = 0.0;
    for (double& v : r) {
      v = std::exp(v - peak);
      z += v;
    }
    for (double& v : r) v /= z;
  }
  return out;
}

std::vector<std::size_t> nearest_prototype(const DenseMatrix& features,
                                           const DenseMatrix& prototypes) {
  require(features.cols() == prototypes.cols(), ErrorCode::kDimensionMismatch,
          "features and prototypes differ in dimension");
  std::vector<std::size_t> out(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    double best = INFINITY;
    for (std::size_t c = 0; c < prototypes.rows(); ++c) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < features.cols(); ++d) {
        const double diff = features(i, d) - prototypes(c, d);
        d2 += diff * diff;
      }
      if (d2 < best) {
        best = d2;
        out[i] = c;
      }
    }
  }
  return out;
}

RelabelMetrics evaluate(const RelabelOutcome& outcome, std::span<const std::size_t> true_labels,
                        std::span<const std::size_t> noisy_labels, std::size_t num_classes) {
  const std::size_t n = true_labels.size();
  require(noisy_labels.size() == n && outcome.pseudo_labels.size() == n,
          ErrorCode::kDimensionMismatch, "outcome does not match the dataset size");
  RelabelMetrics m;
  m.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  std::size_t truly_clean = 0;
  for (std::size_t i = 0; i < n; ++i) {
    require(true_labels[i] < num_classes && outcome.pseudo_labels[i] < num_classes,
            ErrorCode::kInvalidInput, "label out of range in evaluate");
    ++m.confusion[true_labels[i]][outcome.pseudo_labels[i]];
    truly_clean += noisy_labels[i] == true_labels[i];
  }
  std::size_t clean_hits = 0;
  for (std::size_t i : outcome.clean_indices) clean_hits += noisy_labels[i] == true_labels[i];
  std::size_t corrected = 0;
  for (std::size_t i : outcome.corrupted_indices) corrected += outcome.pseudo_labels[i] == true_labels[i];

  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.clean_precision = ratio(clean_hits, outcome.clean_indices.size());
  m.clean_recall = ratio(clean_hits, truly_clean);
  m.corrected_accuracy = ratio(corrected, outcome.corrupted_indices.size());
  return m;
}

RelabelMetrics evaluate(const RelabelOutcome& outcome, const SimDataset& dataset) {
  return evaluate(outcome, dataset.true_labels, dataset.noisy_labels, dataset.num_classes);
}

void save_dataset(const SimDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_matrix(dir / "features.csmat", dataset.features, MatrixFormat::kBinary);
  save_matrix(dir / "prototypes.csmat", dataset.prototypes, MatrixFormat::kBinary);
  nlohmann::ordered_json j;
  j["n"] = dataset.features.rows();
  j["num_classes"] = dataset.num_classes;
  j["dim"] = dataset.features.cols();
  j["noise_kind"] = to_string(dataset.noise.kind);
  j["ratio"] = dataset.noise.ratio;
  j["seed"] = dataset.seed;
  j["flip_count"] = dataset.flip_count;
  j["true_labels"] = dataset.true_labels;
  j["noisy_labels"] = dataset.noisy_labels;
  write_text_atomic(dir / "dataset.json", j.dump(2) + "\n");
}

SimDataset load_dataset(const std::filesystem::path& dir) {
  std::ifstream in(dir / "dataset.json");
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + (dir / "dataset.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw_error(ErrorCode::kNonNumeric, std::string("dataset.json: ") + e.what());
  }
  try {
    SimDataset ds{load_matrix(dir / "features.csmat", MatrixFormat::kBinary),
                  load_matrix(dir / "prototypes.csmat", MatrixFormat::kBinary),
                  j.at("true_labels").get<std::vector<std::size_t>>(),
                  j.at("noisy_labels").get<std::vector<std::size_t>>(),
                  j.at("num_classes").get<std::size_t>(),
                  NoiseSpec{j.at("noise_kind").get<std::string>() == "sym" ? NoiseKind::kSymmetric
                                                                          : NoiseKind::kAsymmetric,
                            j.at("ratio").get<double>()},
                  j.at("seed").get<std::uint64_t>(),
                  0};
    require(ds.true_labels.size() == ds.features.rows() &&
                ds.noisy_labels.size() == ds.features.rows(),
            ErrorCode::kDimensionMismatch, "dataset.json label counts do not match features");
    ds.flip_count = count_flips(ds.true_labels, ds.noisy_labels);
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw_error(ErrorCode::kInvalidInput, std::string("dataset.json: ") + e.what());
  }
}

}  // namespace csot
