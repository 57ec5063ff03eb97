#pragma once

#include <cstddef>
#include <functional>

namespace smatch {

/// Worker cap from SMATCH_THREADS (0 or unset = hardware concurrency).
/// Re-read on every call so callers can adjust the environment between runs.
std::size_t thread_budget();

/// Runs fn(i) for i in [0, n). With threads <= 1 this is a plain loop;
/// otherwise indices are pulled from an atomic counter. fn must be safe to
/// invoke concurrently for distinct i; results must not depend on schedule.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace smatch
