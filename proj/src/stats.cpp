#include "rsoc/stats.hpp"

#include <atomic>

namespace rsoc {

namespace {
std::atomic<std::int64_t> g_dyn_evals{0};
}

void reset_dynamics_evals() { g_dyn_evals.store(0, std::memory_order_relaxed); }

std::int64_t dynamics_evals() { return g_dyn_evals.load(std::memory_order_relaxed); }

void count_dynamics_eval() { g_dyn_evals.fetch_add(1, std::memory_order_relaxed); }

}  // namespace rsoc
