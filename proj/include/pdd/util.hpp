#pragma once

#include <functional>

namespace pdd {

/// Runs fn(i) for i in [0, n). Work items land in caller-owned slots, so the
/// result is independent of the number of worker threads.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

int default_thread_count();

}  // namespace pdd
