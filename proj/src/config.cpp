#include "zkb/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zkb/error.hpp"

namespace zkb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

double parse_double(const std::string& key, const std::string& raw) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + raw + "'");
  }
  if (used != raw.size() || !std::isfinite(v)) throw ConfigError(key, "expected a number, got '" + raw + "'");
  return v;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

Config Config::defaults() {
  Config c;
  auto& v = c.values_;
  v["equation.mu"] = 1.0;
  v["equation.beta"] = 1.0;
  v["equation.p"] = 2LL;
  v["grid.Lx"] = 64.0;
  v["grid.Ly"] = 64.0;
  v["grid.Nx"] = 512LL;
  v["grid.Ny"] = 512LL;
  v["time.dt"] = 0.05;
  v["time.t_end"] = 10.0;
  v["time.snapshots"] = std::vector<double>{};
  v["time.dealias_pad"] = 0.0;
  v["time.boundary_guard"] = 1e-6;
  v["data.kind"] = std::string("gaussian");
  v["data.amplitude"] = 1.0;
  v["data.width"] = 1.0;
  v["output.dir"] = std::string("zkblab-out");
  v["output.write_fields"] = false;
  v["experiment.use_config_grid"] = false;
  v["table.t"] = 1.0;
  v["table.l"] = 0LL;
  v["table.j"] = 0LL;
  v["table.x"] = std::vector<double>{-10.0, 10.0, 21.0};
  v["table.y"] = std::vector<double>{0.0, 4.0, 9.0};
  return c;
}

const Config::Value& Config::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "unknown configuration key");
  return it->second;
}

double Config::num(const std::string& key) const {
  const Value& v = at(key);
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto i = std::get_if<long long>(&v)) return double(*i);
  throw ConfigError(key, "not a number");
}

long long Config::integer(const std::string& key) const {
  const Value& v = at(key);
  if (auto i = std::get_if<long long>(&v)) return *i;
  throw ConfigError(key, "not an integer");
}

bool Config::flag(const std::string& key) const {
  const Value& v = at(key);
  if (auto b = std::get_if<bool>(&v)) return *b;
  throw ConfigError(key, "not a boolean");
}

const std::string& Config::str(const std::string& key) const {
  const Value& v = at(key);
  if (auto s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError(key, "not a string");
}

const std::vector<double>& Config::list(const std::string& key) const {
  const Value& v = at(key);
  if (auto l = std::get_if<std::vector<double>>(&v)) return *l;
  throw ConfigError(key, "not a list");
}

void Config::assign(const std::string& key, const std::string& raw_in, const std::string& origin) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "unknown configuration key (" + origin + ")");
  const std::string raw = trim(raw_in);
  Value& slot = it->second;
  if (std::holds_alternative<bool>(slot)) {
    if (raw == "true") slot = true;
    else if (raw == "false") slot = false;
    else throw ConfigError(key, "expected true or false, got '" + raw + "'");
  } else if (std::holds_alternative<long long>(slot)) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw.size()) throw ConfigError(key, "expected an integer, got '" + raw + "'");
    slot = v;
  } else if (std::holds_alternative<double>(slot)) {
    slot = parse_double(key, raw);
  } else if (std::holds_alternative<std::string>(slot)) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') slot = raw.substr(1, raw.size() - 2);
    else slot = raw;
  } else {
    if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
      throw ConfigError(key, "expected a list like [1, 2, 3], got '" + raw + "'");
    std::vector<double> out;
    std::stringstream ss(raw.substr(1, raw.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      out.push_back(parse_double(key, item));
    }
    slot = out;
  }
}

void Config::load_string(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", "malformed section header at " + where);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", "expected key = value at " + where);
    const std::string key = trim(line.substr(0, eq));
    if (section.empty()) throw ConfigError(key, "key outside of a section at " + where);
    assign(section + "." + key, line.substr(eq + 1), where);
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", "cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  load_string(ss.str(), path);
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(assignment, "override must look like section.key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void Config::set(const std::string& key, const std::string& value) { assign(key, value, "override"); }

std::string Config::dump() const {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, v] : values_) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot), name = key.substr(dot + 1);
    if (sec != section) {
      if (!section.empty()) os << "\n";
      os << "[" << sec << "]\n";
      section = sec;
    }
    os << name << " = ";
    if (auto b = std::get_if<bool>(&v)) os << (*b ? "true" : "false");
    else if (auto i = std::get_if<long long>(&v)) os << *i;
    else if (auto d = std::get_if<double>(&v)) os << fmt_double(*d);
    else if (auto s = std::get_if<std::string>(&v)) os << '"' << *s << '"';
    else {
      const auto& l = std::get<std::vector<double>>(v);
      os << "[";
      for (std::size_t n = 0; n < l.size(); ++n) os << (n ? ", " : "") << fmt_double(l[n]);
      os << "]";
    }
    os << "\n";
  }
  return os.str();
}

std::string Config::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Grid grid_from(const Config& c) {
  auto count = [&](const char* key) {
    const long long n = c.integer(key);
    if (n < 8 || n % 2 != 0 || n > (1LL << 24)) throw ConfigError(key, "sample count must be even and >= 8 (got " + std::to_string(n) + ")");
    return int(n);
  };
  auto half_width = [&](const char* key) {
    const double L = c.num(key);
    if (!(L > 0.0)) throw ConfigError(key, "box half-width must be positive");
    return L;
  };
  return Grid(half_width("grid.Lx"), half_width("grid.Ly"), count("grid.Nx"), count("grid.Ny"));
}

Equation equation_from(const Config& c) {
  const long long p = c.integer("equation.p");
  if (p < 1 || p > 64) throw ConfigError("equation.p", "must be an integer in 1..64");
  Equation eq{c.num("equation.mu"), c.num("equation.beta"), int(p)};
  eq.validate();
  return eq;
}

SimConfig sim_config_from(const Config& c) {
  SimConfig s{equation_from(c), grid_from(c), 0.01, 1.0, {}, 0.0, 1e-6};
  s.dt = c.num("time.dt");
  s.t_end = c.num("time.t_end");
  s.snapshot_times = c.list("time.snapshots");
  s.dealias_pad = c.num("time.dealias_pad");
  s.boundary_guard = c.num("time.boundary_guard");
  s.validate();
  return s;
}

Field initial_data(const std::string& kind, const Grid& g, double amplitude, double width) {
  if (!(width > 0.0)) throw ConfigError("data.width", "must be positive");
  const double w2 = width * width;
  if (kind == "gaussian")
    return Field::from_function(g, [&](double x, double y) { return amplitude * std::exp(-(x * x + y * y) / w2); });
  if (kind == "dx_gaussian")
    return Field::from_function(
        g, [&](double x, double y) { return amplitude * (-2.0 * x / w2) * std::exp(-(x * x + y * y) / w2); });
  if (kind == "odd_x")
    return Field::from_function(g, [&](double x, double y) { return amplitude * x * std::exp(-(x * x + y * y) / w2); });
  if (kind == "zero") return Field(g);
  throw ConfigError("data.kind", "unknown initial data '" + kind + "' (gaussian, dx_gaussian, odd_x, zero)");
}

Field initial_data_from(const Config& c, const Grid& g) {
  return initial_data(c.str("data.kind"), g, c.num("data.amplitude"), c.num("data.width"));
}

}  // namespace zkb
