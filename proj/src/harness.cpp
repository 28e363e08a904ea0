#include "zkb/harness.hpp"

#include <cmath>
#include <string>

#include "zkb/error.hpp"

namespace zkb {

namespace {

// Two-sided 97.5% Student-t quantiles for 1..30 degrees of freedom.
double t975(int dof) {
  static const double q[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                             2.201,  2.179, 2.160,       2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                             2.080,  2.074, 2.069,       2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof < 1) return 0.0;
  if (dof <= 30) return q[dof - 1];
  return 1.960;
}

}  // namespace

void RateSeries::validate() const {
  for (std::size_t n = 0; n < points.size(); ++n) {
    const auto [t, v] = points[n];
    if (!(t > 0.0) || !std::isfinite(t)) throw Error("rate series '" + label + "': times must be positive");
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("rate series '" + label + "': values must be positive and finite");
    if (n > 0 && !(t > points[n - 1].first)) throw Error("rate series '" + label + "': times must increase");
  }
}

RateReport& RateReport::judge(double theory, double tol) {
  theory_slope = theory;
  tolerance = tol;
  judged = true;
  pass = std::abs(slope - theory) <= tol;
  return *this;
}

RateReport& RateReport::judge_at_most(double bound) {
  theory_slope = bound;
  tolerance = 0.0;
  judged = true;
  pass = slope <= bound;
  return *this;
}

RateReport fit_decay_rate(const RateSeries& s, bool relaxed) {
  s.validate();
  const std::size_t n = s.points.size();
  const std::size_t need = relaxed ? 3 : 5;
  if (n < need) throw Error("fit_decay_rate: need at least " + std::to_string(need) + " points, got " + std::to_string(n));
  const double span = s.points.back().first / s.points.front().first;
  if (!relaxed && span < 8.0 * (1.0 - 1e-12))
    throw Error("fit_decay_rate: insufficient span (t ratio " + std::to_string(span) + " < 8)");

  double mx = 0.0, my = 0.0;
  for (const auto& [t, v] : s.points) {
    mx += std::log(t);
    my += std::log(v);
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [t, v] : s.points) {
    const double dx = std::log(t) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  RateReport r;
  r.series = s;
  r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  r.intercept = my - r.slope * mx;
  double sse = 0.0;
  for (const auto& [t, v] : s.points) {
    const double e = std::log(v) - (r.intercept + r.slope * std::log(t));
    r.residuals.push_back(e);
    r.max_abs_residual = std::max(r.max_abs_residual, std::abs(e));
    sse += e * e;
  }
  if (n > 2 && sxx > 0.0) r.slope_ci = t975(int(n) - 2) * std::sqrt(sse / double(n - 2) / sxx);
  return r;
}

namespace theory {
double linf_slope(int l) { return -0.75 - 0.5 * l; }
double l2_slope(int l) { return -0.25 - 0.5 * l; }
double remainder_slope(int l) { return -1.25 - 0.5 * l; }
}  // namespace theory

std::vector<double> log_times(double t0, double t1, int n) {
  if (!(t0 > 0.0) || !(t1 > t0) || n < 2) throw Error("log_times needs 0 < t0 < t1 and n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[std::size_t(k)] = t0 * std::pow(t1 / t0, double(k) / (n - 1));
  out.front() = t0;
  out.back() = t1;
  return out;
}

}  // namespace zkb
