#include "rsoc/csvio.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rsoc/config.hpp"

namespace rsoc {

const char* const kReportHeader =
    "iter,stage,cost,qu_inf,qu_w,eps,alpha_tol,ls_alpha,reg,dyn_evals,wall_ms";

std::string report_row_line(const IterationRecord& row) {
  std::ostringstream out;
  out << row.iter << ',' << row.stage << ',' << format_double(row.cost) << ','
      << format_double(row.qu_inf) << ',' << format_double(row.qu_w) << ','
      << format_double(row.eps) << ',' << format_double(row.alpha_tol) << ','
      << format_double(row.ls_alpha) << ',' << format_double(row.reg) << ',' << row.dyn_evals
      << ',' << format_double(row.wall_ms);
  return out.str();
}

std::string report_csv(const std::vector<IterationRecord>& rows) {
  std::string out = kReportHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += report_row_line(row);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_report_csv(const std::string& path, const std::vector<IterationRecord>& rows) {
  write_text_file(path, report_csv(rows));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& path) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error(path + ": bad numeric field '" + s + "'");
  return v;
}

}  // namespace

std::vector<IterationRecord> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportHeader) throw std::runtime_error(path + ": unexpected report header");
  std::vector<IterationRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 11) throw std::runtime_error(path + ": expected 11 fields per row");
    IterationRecord r;
    r.iter = static_cast<int>(to_double(f[0], path));
    r.stage = static_cast<int>(to_double(f[1], path));
    r.cost = to_double(f[2], path);
    r.qu_inf = to_double(f[3], path);
    r.qu_w = to_double(f[4], path);
    r.eps = to_double(f[5], path);
    r.alpha_tol = to_double(f[6], path);
    r.ls_alpha = to_double(f[7], path);
    r.reg = to_double(f[8], path);
    r.dyn_evals = static_cast<long long>(to_double(f[9], path));
    r.wall_ms = to_double(f[10], path);
    rows.push_back(r);
  }
  return rows;
}

std::string trajectory_csv(const Trajectory& traj, double dt) {
  if (traj.states.empty()) throw std::invalid_argument("trajectory_csv: empty trajectory");
  const Eigen::Index nx = traj.states.front().size();
  const Eigen::Index nu = traj.controls.empty() ? 0 : traj.controls.front().size();
  std::ostringstream out;
  out << "t";
  for (Eigen::Index i = 0; i < nx; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < nu; ++i) out << ",u" << i;
  out << '\n';
  for (size_t t = 0; t < traj.states.size(); ++t) {
    out << format_double(dt * static_cast<double>(t));
    for (Eigen::Index i = 0; i < nx; ++i) out << ',' << format_double(traj.states[t][i]);
    for (Eigen::Index i = 0; i < nu; ++i) {
      out << ',';
      if (t < traj.controls.size()) out << format_double(traj.controls[t][i]);
    }
    out << '\n';
  }
  return out.str();
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, double dt) {
  write_text_file(path, trajectory_csv(traj, dt));
}

}  // namespace rsoc
