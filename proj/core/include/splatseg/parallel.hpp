#pragma once

#include <cstddef>
#include <functional>

namespace splatseg {

/// Number of worker threads used by parallel loops. Honors SPLATSEG_THREADS
/// when set, otherwise std::thread::hardware_concurrency().
unsigned worker_count();

/// Runs fn(i) for i in [0, count) on a pool of worker_count() threads. fn
/// must only write to state owned by item i, which keeps results independent
/// of the schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace splatseg
