#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rsoc/types.hpp"

namespace rsoc {

// Flat key-value configuration with INI-style section headers. Keys are
// addressed as "section.key" ("key" alone for the headerless preamble).
// Serialization preserves first-insertion order and round-trips losslessly
// (doubles printed with 17 significant digits).
class Config {
 public:
  static Config parse_string(const std::string& text);
  static Config parse_file(const std::string& path);
  std::string serialize() const;

  bool has(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Vec get_vec(const std::string& key) const;  // space-separated doubles

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);
  void set_u64(const std::string& key, std::uint64_t value);
  void set_bool(const std::string& key, bool value);
  void set_vec(const std::string& key, const Vec& value);

  // Overlay: other's entries override/extend this config.
  void merge(const Config& other);

  bool operator==(const Config& other) const { return items_ == other.items_; }

 private:
  int find(const std::string& key) const;
  std::vector<std::pair<std::string, std::string>> items_;
};

// Deterministic shortest-faithful double formatting used across config, CSV
// and SVG output ("%.17g", trimmed).
std::string format_double(double v);

}  // namespace rsoc
