#pragma once

#include <cstddef>
#include <functional>

namespace lacuna {

/// Thread count used when a caller passes 0. Starts at 1.
int default_threads();
void set_default_threads(int threads);

/// Runs body(i) for i in [0, count) on up to `threads` workers with a static
/// block split. Results must be written to per-index slots by the caller; the
/// first exception by index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace lacuna
