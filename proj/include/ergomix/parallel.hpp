#pragma once

#include <cstddef>
#include <functional>

namespace ergomix {

/// Worker cap: ERGOMIX_THREADS if set and positive, otherwise the hardware
/// concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Iterations must be independent; results are
/// expected to be written to per-index slots so the outcome does not depend
/// on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ergomix
