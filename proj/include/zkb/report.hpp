#pragma once

#include <cstdint>
#include <string>

#include "zkb/experiments.hpp"

namespace zkb {

// JSON document {experiment, config_hash, seed, series, slope, theory_slope,
// tolerance, pass, notes, verdicts}. The top-level slope fields mirror the
// first judged report. Output is byte-stable for equal inputs.
std::string report_json(const ExperimentResult& r, const std::string& config_hash, std::uint64_t seed);

// "t,value" with a header line.
std::string series_csv(const RateSeries& s);

// Writes <dir>/<experiment>.json and <dir>/<experiment>_<label>.csv for every
// series; creates dir when needed.
void write_report(const std::string& dir, const ExperimentResult& r, const std::string& config_hash,
                  std::uint64_t seed);

// One summary line per verdict and judged report, "PASS name value threshold".
std::string summary_lines(const ExperimentResult& r);

}  // namespace zkb
