#pragma once

#include <cstddef>
#include <functional>

namespace wentzell {

// Calls fn(i) for i in [0, n) on up to `threads` workers (0 = hardware count).
// Work is handed out in index blocks; callers write results by index, so the
// outcome does not depend on the worker count. The first exception thrown by
// any call is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

unsigned resolve_threads(unsigned requested);

}  // namespace wentzell
