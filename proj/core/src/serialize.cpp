#include "csot/serialize.hpp"

#include <algorithm>

#include "csot/matrix_io.hpp"
#include "json.hpp"

namespace csot {
namespace {

using Json = nlohmann::ordered_json;

Json report_json(const SolveReport& r, bool include_timing) {
  Json j;
  j["algo"] = r.algo;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["objective_trace"] = r.objective_trace;
  j["row_residual"] = r.row_residual;
  j["col_residual"] = r.col_residual;
  j["wall_time_ms"] = include_timing ? Json(r.wall_time_ms) : Json(nullptr);
  j["stalled_steps"] = r.stalled_steps;
  return j;
}

Json optional_json(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

std::string report_to_json(const SolveReport& report, bool include_timing) {
  return report_json(report, include_timing).dump(2) + "\n";
}

std::string outcome_to_json(const RelabelResult& result, double budget,
                            const std::optional<RelabelMetrics>& metrics, bool include_timing) {
  const RelabelOutcome& o = result.outcome;
  Json j;
  j["budget"] = budget;
  j["selected_count"] = std::count(o.selected.begin(), o.selected.end(), true);
  j["pseudo_labels"] = o.pseudo_labels;
  j["weights"] = o.weights;
  std::vector<int> mask(o.selected.begin(), o.selected.end());
  j["selected"] = mask;
  j["clean_indices"] = o.clean_indices;
  j["corrupted_indices"] = o.corrupted_indices;
  Json reports = Json::array();
  for (const auto& r : result.reports) reports.push_back(report_json(r, include_timing));
  j["reports"] = reports;
  if (metrics) {
    Json m;
    m["clean_precision"] = optional_json(metrics->clean_precision);
    m["clean_recall"] = optional_json(metrics->clean_recall);
    m["corrected_accuracy"] = optional_json(metrics->corrected_accuracy);
    m["confusion"] = metrics->confusion;
    j["metrics"] = m;
  }
  return j.dump(2) + "\n";
}

std::string bench_to_csv(const std::vector<BenchResult>& results) {
  std::string out = "rows,cols,algo,trials,median_ms,min_ms,max_ms\n";
  for (const auto& r : results) {
    out += std::to_string(r.rows) + "," + std::to_string(r.cols) + "," + to_string(r.algo) + "," +
           std::to_string(r.trials) + "," + format_double(r.median_ms) + "," +
           format_double(r.min_ms) + "," + format_double(r.max_ms) + "\n";
  }
  return out;
}

std::string bench_to_json(const std::vector<BenchResult>& results) {
  Json arr = Json::array();
  for (const auto& r : results) {
    Json j;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    j["algo"] = to_string(r.algo);
    j["trials"] = r.trials;
    j["median_ms"] = r.median_ms;
    j["min_ms"] = r.min_ms;
    j["max_ms"] = r.max_ms;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

}  // namespace csot
