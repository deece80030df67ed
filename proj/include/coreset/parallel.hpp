#pragma once

#include <cstdint>
#include <functional>

namespace coreset {

// Worker count: CORESET_THREADS caps it, hardware concurrency is the default.
int thread_budget();

// Runs fn(i) for i in [0, n). Tasks must write to disjoint state; results are
// independent of scheduling, so parallel runs stay deterministic.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

} // namespace coreset
