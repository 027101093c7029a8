#pragma once

#include <cstddef>
#include <functional>

namespace fpp {

[[nodiscard]] int default_threads();

// Calls fn(i) for every i in [0, n) on up to `threads` workers. Callers write results into
// per-index slots and reduce afterwards in index order, so outputs do not depend on the
// thread count. The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace fpp
