#pragma once

#include <functional>

namespace airygap {

/// Worker count: `requested` if positive, else the hardware concurrency;
/// capped by the AIRYGAP_THREADS environment variable when it is set.
int worker_count(int requested = 0);

/// Calls fn(i) for i in [0, n) on up to `threads` workers. Indices are
/// handed out dynamically; fn must write only to slots owned by i. The
/// first exception thrown by any call is rethrown after all workers join.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace airygap
