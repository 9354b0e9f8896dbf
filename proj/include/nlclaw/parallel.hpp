#pragma once

#include <cstddef>
#include <functional>

namespace nlclaw {

/// Worker cap from NONLOCAL_CLAW_THREADS, else the hardware concurrency.
std::size_t thread_cap();

/// Calls fn(i) for i in [0, n) on at most `threads` workers. Each index is
/// handled by exactly one call, so results written to slot i do not depend on
/// scheduling. The first exception thrown is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t threads = thread_cap());

} // namespace nlclaw
