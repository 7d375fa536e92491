#pragma once

#include <span>
#include <string>

#include "csot/sinkhorn.hpp"

namespace csot::detail {

enum class RowUpdate {
  kEquality,  // u = alpha / (K v)
  kClamped,   // u = min(alpha / (K v), 1)
};

Solution run_scaling(const TransportProblem& problem, const ScalingOptions& options,
                     std::span<const double> initial_v, RowUpdate row_update,
                     const std::string& algo);

void require_positive_marginals(const TransportProblem& problem);

[[noreturn]] void throw_scaling_breakdown(const std::string& algo, const std::string& what,
                                          double epsilon);

}  // namespace csot::detail
