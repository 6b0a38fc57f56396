#pragma once

#include <cstdint>

namespace rsoc {

// Process-wide count of raw dynamics step evaluations. The experiment driver
// resets it at run start and snapshots it per solver iteration; totals depend
// only on the work done, never on the thread schedule.
void reset_dynamics_evals();
std::int64_t dynamics_evals();
void count_dynamics_eval();

}  // namespace rsoc
