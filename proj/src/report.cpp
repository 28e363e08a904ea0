#include "zkb/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "zkb/error.hpp"

namespace zkb {

namespace {

using nlohmann::ordered_json;

// NaN and infinities are not JSON numbers.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

ordered_json series_json(const RateReport& r) {
  ordered_json j;
  j["label"] = r.series.label;
  ordered_json pts = ordered_json::array();
  for (const auto& [t, v] : r.series.points) pts.push_back({num(t), num(v)});
  j["points"] = pts;
  j["slope"] = num(r.slope);
  j["slope_ci"] = num(r.slope_ci);
  j["intercept"] = num(r.intercept);
  ordered_json res = ordered_json::array();
  for (double e : r.residuals) res.push_back(num(e));
  j["residuals"] = res;
  j["judged"] = r.judged;
  j["theory_slope"] = num(r.theory_slope);
  j["tolerance"] = num(r.tolerance);
  j["pass"] = r.pass;
  j["notes"] = r.notes;
  return j;
}

std::string line(bool pass, bool skipped, const std::string& name, double value, double threshold,
                 const std::string& notes) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " value=%.6g threshold=%.6g", value, threshold);
  std::string s = (skipped ? "SKIP " : pass ? "PASS " : "FAIL ") + name + buf;
  if (!notes.empty()) s += "  (" + notes + ")";
  return s + "\n";
}

}  // namespace

std::string report_json(const ExperimentResult& r, const std::string& config_hash, std::uint64_t seed) {
  ordered_json j;
  j["experiment"] = r.experiment;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  ordered_json series = ordered_json::array();
  for (const auto& rep : r.reports) series.push_back(series_json(rep));
  j["series"] = series;
  const RateReport* head = nullptr;
  for (const auto& rep : r.reports)
    if (rep.judged) {
      head = &rep;
      break;
    }
  j["slope"] = head ? num(head->slope) : ordered_json(nullptr);
  j["theory_slope"] = head ? num(head->theory_slope) : ordered_json(nullptr);
  j["tolerance"] = head ? num(head->tolerance) : ordered_json(nullptr);
  j["pass"] = r.pass();
  j["notes"] = r.notes;
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : r.verdicts) {
    ordered_json o;
    o["name"] = v.name;
    o["pass"] = v.pass;
    o["skipped"] = v.skipped;
    o["value"] = num(v.value);
    o["threshold"] = num(v.threshold);
    o["notes"] = v.notes;
    verdicts.push_back(o);
  }
  j["verdicts"] = verdicts;
  return j.dump(2) + "\n";
}

std::string series_csv(const RateSeries& s) {
  std::ostringstream os;
  os << "t,value\n";
  char buf[64];
  for (const auto& [t, v] : s.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, v);
    os << buf;
  }
  return os.str();
}

void write_report(const std::string& dir, const ExperimentResult& r, const std::string& config_hash,
                  std::uint64_t seed) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  auto put = [&](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
  };
  put(fs::path(dir) / (r.experiment + ".json"), report_json(r, config_hash, seed));
  for (const auto& rep : r.reports) put(fs::path(dir) / (r.experiment + "_" + rep.series.label + ".csv"), series_csv(rep.series));
}

std::string summary_lines(const ExperimentResult& r) {
  std::string s;
  for (const auto& rep : r.reports) {
    if (!rep.judged) continue;
    s += line(rep.pass, false, r.experiment + "/" + rep.series.label + "_slope", rep.slope, rep.theory_slope,
              rep.tolerance > 0.0 ? "tolerance " + std::to_string(rep.tolerance).substr(0, 5) : "upper bound");
  }
  for (const auto& v : r.verdicts) s += line(v.pass, v.skipped, r.experiment + "/" + v.name, v.value, v.threshold, v.notes);
  return s;
}

}  // namespace zkb
