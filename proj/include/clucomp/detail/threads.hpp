#pragma once

#include <cstddef>
#include <functional>

namespace clucomp::detail {

/// Worker count: CLUCOMP_THREADS if set and positive, else hardware
/// concurrency, else 1.
int thread_count();

/// Runs fn(i) for i in [0, n), possibly across threads. fn must write
/// only to per-index state; callers reduce in index order afterwards, so
/// results do not depend on the worker count.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace clucomp::detail
