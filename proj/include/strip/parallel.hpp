#pragma once

#include <cstddef>
#include <functional>

namespace strip {

// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency).  Work is split into contiguous blocks; results must not
// depend on which worker runs which index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

int resolve_threads(int threads);

}  // namespace strip
