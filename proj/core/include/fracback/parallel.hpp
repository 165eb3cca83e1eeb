#pragma once

#include <cstddef>
#include <functional>

namespace fracback {

// Runs body(i) for i in [0, count) on up to `threads` workers.
// Each index is executed exactly once; results must be written to
// per-index slots so the outcome does not depend on scheduling.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

// Worker count used when the caller passes 0.
unsigned default_thread_count();

}  // namespace fracback
