#pragma once

#include <cstddef>
#include <functional>

namespace modecap {

/// Worker count: hardware concurrency, capped by MODECAP_THREADS when set.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads with a
/// static partition. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, std::function<void(std::size_t)> const &body);

} // namespace modecap
