#pragma once

#include <cstddef>
#include <functional>

namespace csot {

// kDeterministic runs every kernel on the calling thread. kParallel splits
// row ranges across threads; each output entry is still produced by one
// thread in a fixed order, so results match the sequential path bitwise.
enum class ExecutionMode { kDeterministic, kParallel };

struct Execution {
  ExecutionMode mode = ExecutionMode::kDeterministic;
  unsigned threads = 0;  // 0 = hardware concurrency (parallel mode only)

  unsigned effective_threads() const noexcept;
};

// Calls body(begin, end) over a partition of [0, n).
void for_each_range(std::size_t n, const Execution& exec,
                    const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace csot
