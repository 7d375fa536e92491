#include "csot/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace csot {

unsigned Execution::effective_threads() const noexcept {
  if (mode == ExecutionMode::kDeterministic) return 1;
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void for_each_range(std::size_t n, const Execution& exec,
                    const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(exec.effective_threads(), n);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, w, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace csot
