#pragma once

#include <map>
#include <memory>
#include <vector>

#include "zkb/field.hpp"

namespace zkb {

// u_t + u_xxx + u_yyx - mu u_xx + beta u^p u_x = 0
struct Equation {
  double mu = 1.0;
  double beta = 1.0;
  int p = 2;
  void validate() const;
};

struct SimConfig {
  Equation equation;
  Grid grid;
  double dt = 0.01;
  double t_end = 1.0;
  std::vector<double> snapshot_times;
  // Padding ratio of the dealiasing transform; 0 selects (p+2)/2.
  double dealias_pad = 0.0;
  // Upper limit for the boundary energy fraction; values >= 1 disable it.
  double boundary_guard = 1e-6;

  double pad() const noexcept { return dealias_pad > 0.0 ? dealias_pad : 0.5 * (equation.p + 2); }
  void validate() const;
};

struct DiagPoint {
  double t = 0.0;
  double l2 = 0.0;
  double linf_u = 0.0;
  double linf_dxu = 0.0;
  double l2_dxu = 0.0;
  double h21 = 0.0;     // ||u||_{H^{2,1}}
  double h21_dx = 0.0;  // ||u_x||_{H^{2,1}}
  double dissipation_residual = 0.0;
  double boundary_mass = 0.0;
};

struct Diagnostics {
  std::vector<DiagPoint> series;

  // (1+t)^{3/4+l/2} ||d_x^l u||_inf for l in {0, 1}
  std::vector<double> H(int l) const;
  // (1+t)^{1/4} ||u|| + (1+t)^{3/4} ||u_x||
  std::vector<double> K() const;
  // max_t ( ||u||_{H^{2,1}}^2 + mu \int_0^t ||u_x||_{H^{2,1}}^2 ) / ||u0||_{H^{2,1}}^2
  double h21_energy_ratio(double mu) const;
};

struct Snapshot {
  double t;
  Field u;
};

struct Trajectory {
  SimConfig config;
  std::vector<Snapshot> snapshots;
  Diagnostics diagnostics;
};

enum class Dispersion { full, no_cubic };

// Exact discrete semigroup exp(t lambda); with no_cubic the xi^3 part of the
// symbol is dropped (the flow of v_t + v_yyx - mu v_xx = 0).
Field linear_propagate(const Field& u0, double t, double mu, Dispersion d = Dispersion::full);

// -beta/(p+1) d_x (u^{p+1}) with a zero-padded product transform.
Field nonlinear_term(const Field& u, const Equation& eq, double pad = 0.0);

// ETDRK4 in raw DFT space. Coefficient sets are cached per step size.
class Integrator {
public:
  explicit Integrator(const SimConfig& cfg);
  ~Integrator();
  Integrator(const Integrator&) = delete;
  Integrator& operator=(const Integrator&) = delete;

  // One step of size h; `t` only labels errors.
  CVec step(const CVec& u_hat, double h, double t) const;
  CVec nonlinear(const CVec& u_hat) const;
  const SimConfig& config() const noexcept { return cfg_; }

private:
  struct Coeffs;
  const Coeffs& coeffs(double h) const;
  SimConfig cfg_;
  int Mx_, My_;
  std::vector<double> ik_;  // xi_k with the Nyquist column zeroed
  mutable std::map<double, std::unique_ptr<Coeffs>> cache_;
};

// One ETDRK4 step of size cfg.dt from time t.
Field advance(const Field& state, double t, const SimConfig& cfg);

Trajectory run(const Field& u0, const SimConfig& cfg);

// |‖u(t)‖² + 2 mu \int_0^t ‖u_x‖² - ‖u0‖²| / ‖u0‖², trapezoid over the steps.
std::vector<double> dissipation_residual(const Trajectory& traj);

// simpson: composite Simpson on the whole integrand S(t - s) N(s).
// exponential_simpson: the nonlinearity is interpolated quadratically on each
// Simpson pair and integrated exactly against the semigroup factor (the two
// rules agree when lambda = 0).
enum class DuhamelRule { exponential_simpson, simpson };

// sup over checkpoints t_n (even n) of
//   ‖u(t_n) - S(t_n) u0 + beta/(p+1) \int_0^{t_n} S(t_n - s) d_x(u^{p+1})(s) ds‖ / ‖u0‖
// over equally spaced snapshots starting at t = 0.
double duhamel_residual(const Trajectory& traj, const Equation& eq,
                        DuhamelRule rule = DuhamelRule::exponential_simpson);

}  // namespace zkb
