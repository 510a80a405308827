#pragma once

#include <functional>

namespace evodich {

// Resolves the worker count: explicit request > EVODICH_THREADS > hardware.
// A request of 0 means "auto".
int resolve_thread_count(int requested);

// Runs fn(i) for i in [0, n). Every index writes only its own outputs, so
// results are identical for any worker count.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

} // namespace evodich
