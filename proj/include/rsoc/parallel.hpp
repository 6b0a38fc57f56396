#pragma once

#include <functional>

namespace rsoc {

// Size of the worker pool used by the sample-batch kernels. Affects wall time
// only: every kernel writes into pre-allocated per-index slots and reduces in
// index order, so results are identical for any value. 1 disables OpenMP.
void set_worker_threads(int n);
int worker_threads();

// True when parallel kernels should actually fan out (pool size > 1 and we
// are not already inside a parallel region).
bool parallel_allowed();

namespace detail {
void run_indexed(int n, const std::function<void(int)>& body, bool allow_parallel);
}

// Runs body(0..n-1), concurrently when the pool allows it. Bodies must only
// write to disjoint slots; callers reduce in index order afterwards. If any
// body throws, the error from the lowest index is rethrown (deterministic
// regardless of schedule).
template <typename F>
void parallel_for_indexed(int n, F&& body, bool allow_parallel = true) {
  detail::run_indexed(n, std::function<void(int)>(std::forward<F>(body)), allow_parallel);
}

}  // namespace rsoc
