#pragma once

#include <cstddef>
#include <functional>

namespace garchmom {

/// GARCHMOM_THREADS if set to a positive integer, else hardware concurrency.
unsigned default_thread_count();

/// Runs body(i) for i in [0, n) over `threads` workers (0 = default). Each
/// index is processed exactly once; callers write results into slot i so the
/// output order never depends on the thread count. The first exception thrown
/// by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace garchmom
