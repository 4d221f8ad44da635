#pragma once

#include <cstddef>
#include <functional>

namespace gausspack {

// Number of worker threads to use: `requested` if positive, otherwise the
// GAUSSPACK_THREADS environment variable if positive, otherwise the hardware
// concurrency (at least 1).
int thread_count(int requested = 0);

// Calls body(i) for i in [0, n), distributing indices over `threads` workers.
// Each index is processed exactly once; callers write to disjoint slots so the
// result does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace gausspack
