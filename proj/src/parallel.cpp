#include "rsoc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rsoc {

namespace {
int g_threads = 1;
}

void set_worker_threads(int n) { g_threads = std::max(1, n); }

int worker_threads() { return g_threads; }

bool parallel_allowed() {
#ifdef _OPENMP
  return g_threads > 1 && !omp_in_parallel();
#else
  return false;
#endif
}

namespace detail {

void run_indexed(int n, const std::function<void(int)>& body, bool allow_parallel) {
#ifdef _OPENMP
  if (allow_parallel && n > 1 && parallel_allowed()) {
    std::vector<std::string> errors(static_cast<std::size_t>(n));
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(static) num_threads(g_threads)
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
        failed.store(true, std::memory_order_relaxed);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = "unknown error";
        failed.store(true, std::memory_order_relaxed);
      }
    }
    if (failed.load()) {
      for (const auto& e : errors) {
        if (!e.empty()) throw std::runtime_error(e);
      }
    }
    return;
  }
#else
  (void)allow_parallel;
#endif
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace detail

}  // namespace rsoc
