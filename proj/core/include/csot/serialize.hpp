#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csot/bench.hpp"
#include "csot/problem.hpp"
#include "csot/relabel.hpp"
#include "csot/simlab.hpp"

namespace csot {

// When `include_timing` is false wall-clock fields are written as null so
// that repeated runs produce byte-identical files.
std::string report_to_json(const SolveReport& report, bool include_timing = true);

std::string outcome_to_json(const RelabelResult& result, double budget,
                            const std::optional<RelabelMetrics>& metrics,
                            bool include_timing = true);

std::string bench_to_csv(const std::vector<BenchResult>& results);
std::string bench_to_json(const std::vector<BenchResult>& results);

}  // namespace csot
