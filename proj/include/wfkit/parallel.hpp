#pragma once

#include <cstddef>
#include <functional>

namespace wfkit {

// Worker count: WFKIT_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, count). Each index is visited exactly once; callers
// write results into preallocated slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace wfkit
