#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace locreg {

/// Worker cap: LOCREG_THREADS if set (>=1), else hardware concurrency.
unsigned max_threads();

namespace detail {
void parallel_for_impl(std::size_t count, const std::function<void(std::size_t)>& fn);
}

/// Runs fn(0)..fn(count-1) on up to max_threads() workers with a static
/// contiguous partition. Items must be independent; callers that need a
/// reduction store per-index results and fold them sequentially afterwards,
/// which keeps outputs identical across thread counts. Nested calls run
/// serially. The first exception thrown by any item is rethrown.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
    detail::parallel_for_impl(count, std::function<void(std::size_t)>(std::forward<F>(fn)));
}

}  // namespace locreg
