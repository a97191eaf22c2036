#pragma once

#include <cstdint>
#include <functional>

namespace kinmc {

// Runs fn(0..n-1) on up to `threads` workers pulling indices from a shared
// counter. Each index is processed exactly once; callers own any output
// slotting, so results are schedule-independent by construction.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t)>& fn);

// Hardware concurrency with a sane floor of one.
int default_threads();

}  // namespace kinmc
