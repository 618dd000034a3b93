#pragma once

#include <cstddef>
#include <functional>

namespace spherekern {

/// Upper bound on worker threads used by parallel loops. 0 means hardware concurrency.
void set_max_threads(unsigned threads);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Iterations must be independent; the first
/// exception thrown by any iteration is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace spherekern
