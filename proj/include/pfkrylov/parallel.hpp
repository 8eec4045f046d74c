#pragma once

#include <functional>

namespace pfk {

// Worker count: PFKRYLOV_THREADS when set (clamped to >= 1), otherwise one
// per available core.
int thread_budget();

// Runs fn(0..n-1) across the thread budget. Callers own determinism by
// writing results into per-index slots and reducing serially afterwards.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace pfk
