#pragma once

#include <cstddef>
#include <functional>

namespace ittail {

/// Number of worker threads used by grid checks and scans. 0 selects
/// std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; the
/// caller stores results by index so the outcome never depends on
/// scheduling. Exceptions thrown by body are rethrown (lowest index first).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ittail
