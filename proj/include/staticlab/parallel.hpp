#pragma once

#include <cstddef>
#include <functional>

namespace staticlab {

enum class Execution { Serial, Parallel };

// Thread cap: STATICLAB_THREADS if set to a positive integer, else the
// OpenMP default.
int thread_count();

// Runs body(i) for i in [0, count). Each index is independent; results must be
// written to per-index slots so output order never depends on scheduling.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body,
                    Execution mode = Execution::Parallel);

}  // namespace staticlab
