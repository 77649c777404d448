#include "staticlab/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

namespace staticlab {

int thread_count() {
  if (const char* env = std::getenv("STATICLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body, Execution mode) {
  if (mode == Execution::Serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  // Exceptions cannot cross the parallel region; keep the one from the lowest index.
  std::exception_ptr first;
  std::size_t first_index = count;
  std::mutex guard;
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace staticlab
