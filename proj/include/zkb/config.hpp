#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "zkb/field.hpp"
#include "zkb/solver.hpp"

namespace zkb {

// Layered key/value configuration: built-in defaults, then a TOML-style file
// ([section] headers, `key = value` with numbers, booleans, quoted strings
// and flat number lists), then `section.key=value` overrides. Keys that are
// not in the defaults are rejected.
class Config {
public:
  using Value = std::variant<bool, long long, double, std::string, std::vector<double>>;

  static Config defaults();

  void load_file(const std::string& path);
  void load_string(const std::string& text, const std::string& origin = "<string>");
  void set(const std::string& assignment);  // "section.key=value"
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double num(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;

  // Effective configuration as TOML text (sections and keys sorted).
  std::string dump() const;
  // FNV-1a 64-bit hash of dump(), as 16 hex digits.
  std::string hash() const;

private:
  const Value& at(const std::string& key) const;
  void assign(const std::string& key, const std::string& raw, const std::string& origin);
  std::map<std::string, Value> values_;
};

Grid grid_from(const Config& c);
Equation equation_from(const Config& c);
SimConfig sim_config_from(const Config& c);

// Initial data named by data.kind: gaussian, dx_gaussian, odd_x, zero.
// Scaled by data.amplitude, width data.width.
Field initial_data_from(const Config& c, const Grid& g);
Field initial_data(const std::string& kind, const Grid& g, double amplitude = 1.0, double width = 1.0);

}  // namespace zkb
