#pragma once

#include <cstddef>
#include <functional>

namespace adoptrace {

/// Runs `task(i)` for every i in [0, count) on up to `threads` workers.
/// The first exception thrown by any task is rethrown on the caller.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task);

/// `requested` if non-zero, otherwise the hardware concurrency (at least 1).
std::size_t resolve_threads(std::size_t requested) noexcept;

}  // namespace adoptrace
