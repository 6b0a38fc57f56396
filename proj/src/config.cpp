#include "rsoc/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rsoc {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  // Shortest representation that parses back to the same bits.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw std::runtime_error("config: unterminated section header at line " +
                                 std::to_string(lineno));
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key=value at line " + std::to_string(lineno));
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
    cfg.set(section.empty() ? key : section + "." + key, value);
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

std::string Config::serialize() const {
  // Group by section in first-appearance order.
  std::ostringstream out;
  std::vector<std::string> sections;
  for (const auto& [key, value] : items_) {
    size_t dot = key.rfind('.');
    std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    bool seen = false;
    for (const auto& s : sections) seen = seen || s == sec;
    if (!seen) sections.push_back(sec);
  }
  bool first = true;
  for (const auto& sec : sections) {
    if (!sec.empty()) {
      if (!first) out << "\n";
      out << "[" << sec << "]\n";
    }
    first = false;
    for (const auto& [key, value] : items_) {
      size_t dot = key.rfind('.');
      std::string ksec = dot == std::string::npos ? "" : key.substr(0, dot);
      if (ksec != sec) continue;
      out << (dot == std::string::npos ? key : key.substr(dot + 1)) << " = " << value << "\n";
    }
  }
  return out.str();
}

int Config::find(const std::string& key) const {
  for (size_t i = 0; i < items_.size(); ++i)
    if (items_[i].first == key) return static_cast<int>(i);
  return -1;
}

bool Config::has(const std::string& key) const { return find(key) >= 0; }

std::string Config::get_string(const std::string& key) const {
  int i = find(key);
  if (i < 0) throw std::runtime_error("config: missing key '" + key + "'");
  return items_[static_cast<size_t>(i)].second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  int i = find(key);
  return i < 0 ? fallback : items_[static_cast<size_t>(i)].second;
}

double Config::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw std::runtime_error("config: key '" + key + "' is not a number: '" + s + "'");
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const std::string s = get_string(key);
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw std::runtime_error("config: key '" + key + "' is not an integer: '" + s + "'");
  return static_cast<int>(v);
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string s = get_string(key);
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw std::runtime_error("config: key '" + key + "' is not an integer: '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

bool Config::get_bool(const std::string& key) const {
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::runtime_error("config: key '" + key + "' is not a boolean: '" + s + "'");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

Vec Config::get_vec(const std::string& key) const {
  const std::string s = get_string(key);
  std::istringstream in(s);
  std::vector<double> vals;
  std::string tok;
  while (in >> tok) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
      throw std::runtime_error("config: key '" + key + "' has a non-numeric entry: '" + tok + "'");
    vals.push_back(v);
  }
  Vec out(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  int i = find(key);
  if (i >= 0)
    items_[static_cast<size_t>(i)].second = value;
  else
    items_.emplace_back(key, value);
}

void Config::set_double(const std::string& key, double value) { set(key, format_double(value)); }

void Config::set_int(const std::string& key, long long value) { set(key, std::to_string(value)); }

void Config::set_u64(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void Config::set_bool(const std::string& key, bool value) { set(key, value ? "true" : "false"); }

void Config::set_vec(const std::string& key, const Vec& value) {
  std::string s;
  for (Eigen::Index i = 0; i < value.size(); ++i) {
    if (i) s += " ";
    s += format_double(value[i]);
  }
  set(key, s);
}

void Config::merge(const Config& other) {
  for (const auto& [key, value] : other.items_) set(key, value);
}

}  // namespace rsoc
