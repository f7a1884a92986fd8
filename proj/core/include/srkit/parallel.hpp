#pragma once

#include <cstddef>
#include <functional>

namespace srkit {

/// Worker count: SRKIT_THREADS when set to a positive integer, else the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Work is handed out by index,
/// so results written to slot i are independent of scheduling. The first exception thrown by
/// any body is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace srkit
