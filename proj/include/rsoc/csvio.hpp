#pragma once

#include <string>
#include <vector>

#include "rsoc/ddp.hpp"
#include "rsoc/problem.hpp"

namespace rsoc {

// Pinned iteration-report schema; header must stay bit-exact.
extern const char* const kReportHeader;

std::string report_row_line(const IterationRecord& row);
std::string report_csv(const std::vector<IterationRecord>& rows);
void write_report_csv(const std::string& path, const std::vector<IterationRecord>& rows);
std::vector<IterationRecord> read_report_csv(const std::string& path);

// One row per timestep: t, state components, control components. The final
// row carries the terminal state with empty control cells.
std::string trajectory_csv(const Trajectory& traj, double dt);
void write_trajectory_csv(const std::string& path, const Trajectory& traj, double dt);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace rsoc
