#pragma once

// Deterministic data parallelism: a fixed contiguous chunk per worker, no
// work stealing, so outputs never depend on scheduling. The EGORIG_THREADS
// environment variable caps the worker count.

#include <functional>

namespace egorig {

// Worker budget: EGORIG_THREADS when set to a positive integer, otherwise
// the hardware concurrency. Always at least 1.
int threadBudget();

// Runs fn(i) for i in [begin, end) across the thread budget. Exceptions from
// workers are rethrown on the calling thread.
void parallelFor(int begin, int end, const std::function<void(int)>& fn);

}  // namespace egorig
