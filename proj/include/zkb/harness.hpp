#pragma once

#include <string>
#include <utility>
#include <vector>

namespace zkb {

struct RateSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (t, value)
  void validate() const;  // t strictly increasing, values positive and finite
};

struct RateReport {
  RateSeries series;
  double slope = 0.0;
  double slope_ci = 0.0;  // 95% half-width
  double intercept = 0.0;
  std::vector<double> residuals;  // log(value) - fit
  double max_abs_residual = 0.0;
  double theory_slope = 0.0;
  double tolerance = 0.0;
  bool judged = false;
  bool pass = false;
  std::string notes;

  // pass = |slope - theory| <= tol
  RateReport& judge(double theory, double tol);
  // pass = slope <= bound (one-sided rate requirements)
  RateReport& judge_at_most(double bound);
};

// Least squares of log(value) on log(t). Needs >= 5 points spanning a factor
// >= 8 in t unless `relaxed` (used for fixed 3-point design series).
RateReport fit_decay_rate(const RateSeries& s, bool relaxed = false);

struct Verdict {
  std::string name;
  bool pass = false;
  bool skipped = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string notes;
};

// Exponents of the decay statements, indexed by the x-derivative order.
namespace theory {
double linf_slope(int l);       // -3/4 - l/2
double l2_slope(int l);         // -1/4 - l/2
double remainder_slope(int l);  // -5/4 - l/2
}  // namespace theory

// Log-spaced times in [t0, t1], n >= 2, endpoints exact.
std::vector<double> log_times(double t0, double t1, int n);

}  // namespace zkb
