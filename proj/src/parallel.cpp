#include "mwfpi/parallel.hpp"

#include <chrono>
#include <cstdlib>

#include <omp.h>

namespace mwfpi {

int default_workers() {
  if (const char* env = std::getenv("MWFPI_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return omp_get_max_threads();
}

namespace detail {

double wall_clock() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void run_indexed(std::size_t n, int workers, Execution exec, const std::function<void(std::size_t)>& body) {
  if (exec == Execution::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const int w = workers > 0 ? workers : default_workers();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(w)
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace detail
}  // namespace mwfpi
