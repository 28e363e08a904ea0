#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zkb/harness.hpp"
#include "zkb/solver.hpp"

namespace zkb {

struct DataSpec {
  std::string kind = "gaussian";  // see initial_data
  double amplitude = 1.0;
  double width = 1.0;
  Field make(const Grid& g) const;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<RateReport> reports;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;
  // Every judged report and every non-skipped verdict passes.
  bool pass() const;
};

// x-elongated box for the long-time linear studies, dx = dy = 0.5.
Grid decay_box();
// Box of the long small-data nonlinear run, dx = dy = 0.5.
Grid long_run_box();
// Small box of the solver consistency studies.
Grid reference_box();

// Shared small-data nonlinear run (approximation, lower bound, profile).
struct NonlinearRunParams {
  Grid grid = long_run_box();
  Equation equation{1.0, 1.0, 2};
  DataSpec data{"gaussian", 0.05, 1.0};
  double dt = 1.0;
  std::vector<double> times{10.0, 20.0, 40.0, 80.0, 100.0};
  double boundary_guard = 1e-2;
};

struct NonlinearRun {
  NonlinearRunParams params;
  Field u0;
  Trajectory traj;
};

NonlinearRun nonlinear_run(const NonlinearRunParams& p);

struct LinearDecayParams {
  Grid grid = decay_box();
  double mu = 1.0;
  DataSpec data;
  double t0 = 5.0, t1 = 160.0;
  int n_times = 9;
  double tol_linf0 = 0.03;
  double tol_linf1 = 0.05;
  double tol_l2 = 0.03;
  // Series stop at the first time the boundary energy fraction exceeds this.
  double boundary_guard = 1e-2;
  bool odd_variant = true;
  double odd_slope_max = -0.85;
};

ExperimentResult experiment_linear_decay(const LinearDecayParams& p);

// sup |d_x^l U(., ., t)| over a self-similar sample grid against decay_bound.
struct KernelBoundParams {
  double mu = 1.0;
  std::vector<double> times{1.0, 4.0, 16.0, 64.0};
  std::vector<int> ls{0, 1};
  double X0 = -12.0, X1 = 6.0, dX = 0.1;  // x = X sqrt(t)
  double Y1 = 5.0, dY = 0.25;             // y = Y t^{1/4}, U is even in y
};

ExperimentResult kernel_bound_check(const KernelBoundParams& p);

// Quadrature against grid route at random interior grid points, plus the
// y-mollified comparison.
struct KernelCrossParams {
  double L = 60.0;
  int N = 1024;
  double mu = 1.0;
  std::vector<double> times{0.5, 1.0, 4.0};
  int points = 100;
  double tol = 1e-5;
  double interior = 1.0 / 3.0;  // |x|, |y| <= interior * L
  double sigma = 2.0;
  int mollified_points = 30;
  double mollified_y = 6.0;  // |y| range of the mollified samples
  std::uint64_t seed = 1;
};

ExperimentResult kernel_cross_oracle(const KernelCrossParams& p);

struct ApproximationParams {
  double mu = 1.0;
  int l = 0;
  // (a) U - V on self-similar samples
  std::vector<double> remainder_times{4.0, 8.0, 16.0, 32.0, 64.0};
  double X0 = -10.0, X1 = 6.0, dX = 0.1;
  double Y1 = 5.0, dY = 0.2;
  double tol_remainder = 0.05;
  // (b) S(t)u0 - V_0 on the grid
  Grid grid = decay_box();
  DataSpec data;
  std::vector<double> mathV_times{10.0, 20.0, 50.0, 100.0};
  double mathV_ratio = 0.5;
  double mathV_slope_max = -0.2;
  // (c) u - v for the nonlinear run
  double nonlinear_t0 = 10.0, nonlinear_t1 = 80.0;
  double nonlinear_ratio = 0.5;
  NonlinearRunParams nonlinear;
};

ExperimentResult experiment_approximation(const ApproximationParams& p, const NonlinearRun* shared = nullptr);

struct LowerBoundParams {
  Grid grid = decay_box();
  double mu = 1.0;
  DataSpec data;
  std::vector<int> ls{0, 1};
  std::vector<double> times{50.0, 100.0, 200.0};
  double factor = 0.95;
  double nonlinear_factor = 0.9;
  double nonlinear_time = 80.0;
  NonlinearRunParams nonlinear;
};

// Throws HypothesisError when the data has zero mass.
ExperimentResult experiment_lower_bound(const LowerBoundParams& p, const NonlinearRun* shared = nullptr);

struct ProfileParams {
  Grid grid = decay_box();
  Grid m_grid = Grid(20.0, 20.0, 512, 512);  // grid of the M-functional
  double mu = 1.0;
  DataSpec data;
  int j = 0;
  int l = 0;
  std::vector<double> times{10.0, 20.0, 50.0, 100.0};
  double decrease = 0.4;
  // Sample window: every grid point of the core; in the wake, columns at
  // log-spaced distances behind the core and every wake_stride_y-th row.
  double core_X0 = -14.0, core_X1 = 6.0, core_Y = 5.0;
  double wake_fraction = 0.98;
  int wake_columns = 64, wake_stride_y = 4;
  bool mirrored_info = true;
  std::vector<double> m_sensitivity_L{10.0, 20.0, 40.0};
  double m_anchor_tol = 0.02;
  // W/R remainder diagnostics
  DataSpec wr_data{"dx_gaussian", 1.0, 1.0};
  std::vector<double> wr_times{4.0, 16.0, 64.0};
  std::vector<double> wr_y{0.0, 1.0};
  double wr_slope_max = -1.2;
  double alpha = 0.6;
  bool gaussian_wr_info = true;
};

ExperimentResult experiment_profile(const ProfileParams& p, const NonlinearRun* shared = nullptr);

struct DissipationParams {
  Grid grid = reference_box();
  DataSpec data{"gaussian", 0.5, 1.0};
  double mu = 1.0;
  double t_end = 10.0;
  double dt_linear = 5e-4;
  double dt_nonlinear = 5e-3;
  std::vector<int> ps{2, 3};
  double tol_linear = 1e-6;
  double tol_nonlinear = 1e-4;
};

ExperimentResult dissipation_study(const DissipationParams& p);

struct DuhamelParams {
  Grid grid = reference_box();
  DataSpec data{"gaussian", 0.5, 1.0};
  Equation equation{1.0, 1.0, 2};
  double t_end = 2.0;
  int snapshots = 65;
  double dt = 0.01;
  double tol = 1e-4;
  bool refine = true;  // also run with dt/2 and 2(snapshots-1)+1 snapshots
};

ExperimentResult duhamel_study(const DuhamelParams& p);

struct OrderParams {
  Grid grid = reference_box();
  DataSpec data{"gaussian", 0.5, 1.0};
  Equation equation{1.0, 1.0, 2};
  double t_end = 1.0;
  std::vector<double> dts{0.05, 0.025, 0.0125, 0.00625};
  double order = 4.0;
  double tol = 0.5;
};

ExperimentResult integrator_order_study(const OrderParams& p);

struct InequalityParams {
  std::uint64_t seed = 20261016;
  double L = 32.0;
  int N = 432;
  int n_random = 200;
  int max_bumps = 12;
  int n_pairs = 100;
  int n_smoothing = 50;
  double smoothing_tol = 1e-10;
  bool with_dissipation = true;
  DissipationParams dissipation;
};

// Random corpus member: up to max_bumps Gaussian bumps, centers in the inner
// half-box, widths in [0.5, 3], amplitudes in [-1, 1].
Field random_bump_field(const Grid& g, std::uint64_t seed, int index, int max_bumps = 12);
// The twenty structured corpus members.
std::vector<Field> structured_fields(const Grid& g);
// sup_xi (1+xi^2)^{a/2} e^{-mu t xi^2} by a fine scan and golden refinement.
double smoothing_factor_scan(double a, double mu, double t);

ExperimentResult inequality_suite(const InequalityParams& p);

}  // namespace zkb
