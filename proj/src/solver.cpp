#include "zkb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zkb/error.hpp"
#include "zkb/kernels.hpp"

namespace zkb {

namespace {

constexpr int kContour = 32;

inline double herm_weight(int m, int Ny) { return (m == 0 || m == Ny / 2) ? 1.0 : 2.0; }

cplx lambda_of(double xi, double eta, double mu, Dispersion d) {
  const double disp = (d == Dispersion::full ? xi * xi * xi : 0.0) + xi * eta * eta;
  return cplx(-mu * xi * xi, disp);
}

// Squared L2 norm from raw coefficients, weighted by w(xi, eta).
template <class W>
double spectral_energy(const Grid& g, const CVec& c, W&& w) {
  const int Nx = g.Nx(), Ny = g.Ny(), Nyh = g.Nyh();
  double s = 0.0;
  for (int k = 0; k < Nx; ++k) {
    const double xi = g.xi(k);
    for (int m = 0; m < Nyh; ++m)
      s += herm_weight(m, Ny) * w(xi, g.eta(m)) * std::norm(c[std::size_t(k) * Nyh + m]);
  }
  return s * g.dx() * g.dy() / double(g.size());
}

int padded_size(int n, double pad) { return fft::good_size(int(std::ceil(pad * n - 1e-9))); }

// u^{p+1} on the padded grid, transformed back and truncated to the coarse
// raw spectrum. Nyquist rows/columns are not carried to the fine grid.
CVec dealiased_power(const Grid& g, const CVec& c, int power, int Mx, int My) {
  const int Nx = g.Nx(), Ny = g.Ny(), Nyh = g.Nyh(), Myh = My / 2 + 1;
  CVec fine(std::size_t(Mx) * Myh, cplx(0.0));
  for (int k = 0; k < Nx; ++k) {
    if (k == Nx / 2) continue;
    const int kf = k < Nx / 2 ? k : Mx - (Nx - k);
    for (int m = 0; m < Ny / 2; ++m) fine[std::size_t(kf) * Myh + m] = c[std::size_t(k) * Nyh + m];
  }
  RVec u(std::size_t(Mx) * My);
  fft::c2r_2d(Mx, My, fine.data(), u.data());
  const double inv = 1.0 / double(g.size());
  for (auto& v : u) {
    v = std::pow(v * inv, power);
    if (!std::isfinite(v)) throw NumericalError("amplitude blowup in the nonlinear term");
  }
  fft::r2c_2d(Mx, My, u.data(), fine.data());
  CVec out(g.spec_size(), cplx(0.0));
  const double scale = double(g.size()) / (double(Mx) * double(My));
  for (int k = 0; k < Nx; ++k) {
    if (k == Nx / 2) continue;
    const int kf = k < Nx / 2 ? k : Mx - (Nx - k);
    for (int m = 0; m < Ny / 2; ++m) out[std::size_t(k) * Nyh + m] = scale * fine[std::size_t(kf) * Myh + m];
  }
  return out;
}

DiagPoint diagnose(const Grid& g, const CVec& c, double t) {
  DiagPoint d;
  d.t = t;
  d.l2 = std::sqrt(spectral_energy(g, c, [](double, double) { return 1.0; }));
  d.l2_dxu = std::sqrt(spectral_energy(g, c, [](double xi, double) { return xi * xi; }));
  d.h21 = std::sqrt(spectral_energy(g, c, [](double xi, double eta) {
    const double a = 1.0 + xi * xi;
    return a * a * (1.0 + eta * eta);
  }));
  d.h21_dx = std::sqrt(spectral_energy(g, c, [](double xi, double eta) {
    const double a = 1.0 + xi * xi;
    return xi * xi * a * a * (1.0 + eta * eta);
  }));
  Field u = raw_inverse(g, c);
  d.linf_u = linf(u);
  d.boundary_mass = boundary_energy_fraction(u);
  CVec cx = c;
  const int Nyh = g.Nyh();
  for (int k = 0; k < g.Nx(); ++k) {
    const cplx f = k == g.Nx() / 2 ? cplx(0.0) : cplx(0.0, g.xi(k));
    for (int m = 0; m < Nyh; ++m) cx[std::size_t(k) * Nyh + m] *= f;
  }
  d.linf_dxu = linf(raw_inverse(g, cx));
  return d;
}

bool finite(const CVec& c) {
  return std::all_of(c.begin(), c.end(), [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

void Equation::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("equation.mu", "must be positive");
  if (!std::isfinite(beta)) throw ConfigError("equation.beta", "must be finite");
  if (p < 1) throw ConfigError("equation.p", "must be an integer >= 1");
}

void SimConfig::validate() const {
  equation.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time.dt", "must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("time.t_end", "must be non-negative");
  for (std::size_t n = 0; n < snapshot_times.size(); ++n) {
    const double s = snapshot_times[n];
    if (s < 0.0 || s > t_end * (1.0 + 1e-12)) throw ConfigError("time.snapshots", "times must lie in [0, t_end]");
    if (n > 0 && !(s > snapshot_times[n - 1])) throw ConfigError("time.snapshots", "times must be strictly increasing");
  }
  if (dealias_pad != 0.0 && dealias_pad < 0.5 * (equation.p + 2) - 1e-12)
    throw ConfigError("time.dealias_pad", "must be at least (p+2)/2 for exact dealiasing");
  if (!(boundary_guard > 0.0)) throw ConfigError("time.boundary_guard", "must be positive");
}

std::vector<double> Diagnostics::H(int l) const {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& d : series)
    out.push_back(std::pow(1.0 + d.t, 0.75 + 0.5 * l) * (l == 0 ? d.linf_u : d.linf_dxu));
  return out;
}

std::vector<double> Diagnostics::K() const {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& d : series) out.push_back(std::pow(1.0 + d.t, 0.25) * d.l2 + std::pow(1.0 + d.t, 0.75) * d.l2_dxu);
  return out;
}

double Diagnostics::h21_energy_ratio(double mu) const {
  if (series.empty() || series.front().h21 == 0.0) return 0.0;
  const double e0 = series.front().h21 * series.front().h21;
  double integ = 0.0, worst = 0.0;
  for (std::size_t n = 0; n < series.size(); ++n) {
    if (n > 0) {
      const auto &a = series[n - 1], &b = series[n];
      integ += 0.5 * (b.t - a.t) * (a.h21_dx * a.h21_dx + b.h21_dx * b.h21_dx);
    }
    worst = std::max(worst, (series[n].h21 * series[n].h21 + mu * integ) / e0);
  }
  return worst;
}

Field linear_propagate(const Field& u0, double t, double mu, Dispersion d) {
  if (t < 0.0) throw Error("linear_propagate needs t >= 0");
  if (!(mu > 0.0)) throw Error("linear_propagate needs mu > 0");
  if (t == 0.0) return u0;
  const Grid& g = u0.grid();
  CVec c = raw_forward(u0);
  const int Nyh = g.Nyh();
  for (int k = 0; k < g.Nx(); ++k)
    for (int m = 0; m < Nyh; ++m) c[std::size_t(k) * Nyh + m] *= std::exp(t * lambda_of(g.xi(k), g.eta(m), mu, d));
  return raw_inverse(g, c);
}

Field nonlinear_term(const Field& u, const Equation& eq, double pad) {
  eq.validate();
  const Grid& g = u.grid();
  if (eq.beta == 0.0) return Field(g);
  const double pd = pad > 0.0 ? pad : 0.5 * (eq.p + 2);
  CVec w = dealiased_power(g, raw_forward(u), eq.p + 1, padded_size(g.Nx(), pd), padded_size(g.Ny(), pd));
  const int Nyh = g.Nyh();
  const double a = -eq.beta / (eq.p + 1);
  for (int k = 0; k < g.Nx(); ++k) {
    const cplx f = k == g.Nx() / 2 ? cplx(0.0) : cplx(0.0, a * g.xi(k));
    for (int m = 0; m < Nyh; ++m) w[std::size_t(k) * Nyh + m] *= f;
  }
  return raw_inverse(g, w);
}

struct Integrator::Coeffs {
  CVec E, E2, Q, f1, f2, f3;
};

Integrator::Integrator(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  Mx_ = padded_size(cfg_.grid.Nx(), cfg_.pad());
  My_ = padded_size(cfg_.grid.Ny(), cfg_.pad());
  ik_.resize(std::size_t(cfg_.grid.Nx()));
  for (int k = 0; k < cfg_.grid.Nx(); ++k) ik_[std::size_t(k)] = k == cfg_.grid.Nx() / 2 ? 0.0 : cfg_.grid.xi(k);
}

Integrator::~Integrator() = default;

const Integrator::Coeffs& Integrator::coeffs(double h) const {
  auto it = cache_.find(h);
  if (it != cache_.end()) return *it->second;
  // Only dt and the few snapshot-landing steps recur.
  if (cache_.size() >= 4) cache_.clear();
  const Grid& g = cfg_.grid;
  const std::size_t n = g.spec_size();
  auto c = std::make_unique<Coeffs>();
  c->E.resize(n);
  c->E2.resize(n);
  c->Q.resize(n);
  c->f1.resize(n);
  c->f2.resize(n);
  c->f3.resize(n);
  std::vector<cplx> roots(kContour);
  for (int j = 0; j < kContour; ++j)
    roots[std::size_t(j)] = std::exp(cplx(0.0, std::numbers::pi * (j + 0.5) * 2.0 / kContour));
  const int Nyh = g.Nyh();
  for (int k = 0; k < g.Nx(); ++k)
    for (int m = 0; m < Nyh; ++m) {
      const std::size_t idx = std::size_t(k) * Nyh + m;
      const cplx L = h * lambda_of(g.xi(k), g.eta(m), cfg_.equation.mu, Dispersion::full);
      cplx q = 0.0, a = 0.0, b = 0.0, d = 0.0;
      // Contour means of the phi-functions around hL avoid the cancellation
      // of the closed forms for small |hL|.
      for (const cplx& r : roots) {
        const cplx z = L + r;
        const cplx ez = std::exp(z), z3 = z * z * z;
        q += (std::exp(0.5 * z) - 1.0) / z;
        a += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
        b += (2.0 + z + ez * (z - 2.0)) / z3;
        d += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
      }
      c->E[idx] = std::exp(L);
      c->E2[idx] = std::exp(0.5 * L);
      c->Q[idx] = h * q / double(kContour);
      c->f1[idx] = h * a / double(kContour);
      c->f2[idx] = h * b / double(kContour);
      c->f3[idx] = h * d / double(kContour);
    }
  return *cache_.emplace(h, std::move(c)).first->second;
}

CVec Integrator::nonlinear(const CVec& u_hat) const {
  const Grid& g = cfg_.grid;
  const Equation& eq = cfg_.equation;
  CVec w = dealiased_power(g, u_hat, eq.p + 1, Mx_, My_);
  const int Nyh = g.Nyh();
  const double a = -eq.beta / (eq.p + 1);
  for (int k = 0; k < g.Nx(); ++k) {
    const cplx f(0.0, a * ik_[std::size_t(k)]);
    for (int m = 0; m < Nyh; ++m) w[std::size_t(k) * Nyh + m] *= f;
  }
  return w;
}

CVec Integrator::step(const CVec& u, double h, double t) const {
  const Coeffs& c = coeffs(h);
  const std::size_t n = u.size();
  CVec out(n);
  if (cfg_.equation.beta == 0.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c.E[i] * u[i];
    return out;
  }
  const CVec Nu = nonlinear(u);
  CVec a(n), b(n), cc(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = c.E2[i] * u[i] + c.Q[i] * Nu[i];
  const CVec Na = nonlinear(a);
  for (std::size_t i = 0; i < n; ++i) b[i] = c.E2[i] * u[i] + c.Q[i] * Na[i];
  const CVec Nb = nonlinear(b);
  for (std::size_t i = 0; i < n; ++i) cc[i] = c.E2[i] * a[i] + c.Q[i] * (2.0 * Nb[i] - Nu[i]);
  const CVec Nc = nonlinear(cc);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = c.E[i] * u[i] + c.f1[i] * Nu[i] + 2.0 * c.f2[i] * (Na[i] + Nb[i]) + c.f3[i] * Nc[i];
  if (!finite(out)) throw NumericalError("unstable step at t = " + std::to_string(t));
  return out;
}

Field advance(const Field& state, double t, const SimConfig& cfg) {
  if (state.grid() != cfg.grid) throw Error("state and config live on different grids");
  if (!state.all_finite()) throw NumericalError("unstable step: non-finite state at t = " + std::to_string(t));
  if (cfg.boundary_guard < 1.0 && boundary_energy_fraction(state) > cfg.boundary_guard)
    throw BoundaryError("boundary contamination at t = " + std::to_string(t), t);
  Integrator integ(cfg);
  return raw_inverse(cfg.grid, integ.step(raw_forward(state), cfg.dt, t));
}

Trajectory run(const Field& u0, const SimConfig& cfg) {
  if (u0.grid() != cfg.grid) throw Error("initial data and config live on different grids");
  if (!u0.all_finite()) throw NumericalError("initial data is not finite");
  Integrator integ(cfg);
  const Grid& g = cfg.grid;
  const double mu = cfg.equation.mu;

  Trajectory tr{integ.config(), {}, {}};
  CVec c = raw_forward(u0);
  double t = 0.0;
  DiagPoint d = diagnose(g, c, t);
  const double e0 = d.l2 * d.l2;
  double integ_dx = 0.0;
  tr.diagnostics.series.push_back(d);
  auto guard = [&](const DiagPoint& p) {
    if (cfg.boundary_guard < 1.0 && p.boundary_mass > cfg.boundary_guard)
      throw BoundaryError("boundary contamination at t = " + std::to_string(p.t), p.t);
  };
  guard(d);

  std::size_t next = 0;
  auto take_snapshots = [&]() {
    while (next < cfg.snapshot_times.size() && std::abs(cfg.snapshot_times[next] - t) <= 1e-9 * std::max(1.0, t)) {
      tr.snapshots.push_back({cfg.snapshot_times[next], raw_inverse(g, c)});
      ++next;
    }
  };
  take_snapshots();

  const double tol = 1e-9 * std::max(1.0, cfg.t_end);
  while (t < cfg.t_end - tol) {
    const double stop = next < cfg.snapshot_times.size() ? cfg.snapshot_times[next] : cfg.t_end;
    double h = cfg.dt;
    // Land exactly on the next stop; absorb a sliver instead of leaving it.
    if (t + h > stop - tol || stop - (t + h) < 1e-6 * cfg.dt) h = stop - t;
    c = integ.step(c, h, t);
    const double prev_dx = tr.diagnostics.series.back().l2_dxu;
    t = (h == stop - t) ? stop : t + h;
    d = diagnose(g, c, t);
    integ_dx += 0.5 * h * 2.0 * mu * (prev_dx * prev_dx + d.l2_dxu * d.l2_dxu);
    d.dissipation_residual = e0 > 0.0 ? std::abs(d.l2 * d.l2 + integ_dx - e0) / e0 : 0.0;
    tr.diagnostics.series.push_back(d);
    guard(d);
    take_snapshots();
  }
  return tr;
}

std::vector<double> dissipation_residual(const Trajectory& traj) {
  std::vector<double> out;
  const auto& s = traj.diagnostics.series;
  if (s.empty()) return out;
  const double mu = traj.config.equation.mu;
  const double e0 = s.front().l2 * s.front().l2;
  double integ = 0.0;
  out.push_back(0.0);
  for (std::size_t n = 1; n < s.size(); ++n) {
    integ += (s[n].t - s[n - 1].t) * mu * (s[n - 1].l2_dxu * s[n - 1].l2_dxu + s[n].l2_dxu * s[n].l2_dxu);
    out.push_back(e0 > 0.0 ? std::abs(s[n].l2 * s[n].l2 + integ - e0) / e0 : 0.0);
  }
  return out;
}

namespace {

// \int_0^2 e^{z u} u^k du for k = 0, 1, 2.
void exp_moments(cplx z, cplx I[3]) {
  if (std::abs(z) < 0.5) {
    cplx term = 1.0;  // z^n / n!
    I[0] = I[1] = I[2] = 0.0;
    double p2 = 2.0;  // 2^{n+1}
    for (int n = 0; n < 40; ++n) {
      I[0] += term * p2 / double(n + 1);
      I[1] += term * 2.0 * p2 / double(n + 2);
      I[2] += term * 4.0 * p2 / double(n + 3);
      term *= z / double(n + 1);
      p2 *= 2.0;
    }
    return;
  }
  const cplx e = std::exp(2.0 * z);
  I[0] = (e - 1.0) / z;
  I[1] = (2.0 * e - I[0]) / z;
  I[2] = (4.0 * e - 2.0 * I[1]) / z;
}

}  // namespace

double duhamel_residual(const Trajectory& traj, const Equation& eq, DuhamelRule rule) {
  const auto& S = traj.snapshots;
  if (S.size() < 33) throw Error("duhamel_residual needs at least 33 snapshots (got " + std::to_string(S.size()) + ")");
  if (S.front().t != 0.0) throw Error("duhamel_residual needs a snapshot at t = 0");
  const double h = S[1].t - S[0].t;
  for (std::size_t n = 1; n < S.size(); ++n)
    if (std::abs(S[n].t - S[n - 1].t - h) > 1e-9 * h) throw Error("duhamel_residual needs equally spaced snapshots");

  SimConfig cfg = traj.config;
  cfg.equation = eq;
  const Grid& g = cfg.grid;
  Integrator integ(cfg);
  const int Nyh = g.Nyh();
  const std::size_t ns = g.spec_size();

  std::vector<CVec> uh, Nh;
  uh.reserve(S.size());
  Nh.reserve(S.size());
  for (const auto& s : S) {
    uh.push_back(raw_forward(s.u));
    Nh.push_back(eq.beta == 0.0 ? CVec(ns, cplx(0.0)) : integ.nonlinear(uh.back()));
  }
  const double n0 = std::sqrt(spectral_energy(g, uh[0], [](double, double) { return 1.0; }));
  if (n0 == 0.0) return 0.0;

  std::vector<cplx> lam(ns), w0(ns), w1(ns), w2(ns);
  for (int k = 0; k < g.Nx(); ++k)
    for (int m = 0; m < Nyh; ++m) {
      const std::size_t i = std::size_t(k) * Nyh + m;
      lam[i] = lambda_of(g.xi(k), g.eta(m), eq.mu, Dispersion::full);
      if (rule == DuhamelRule::exponential_simpson) {
        // Weights for N(t2), N(t1), N(t0) on a pair ending at t2, with the
        // semigroup measured back from t2.
        cplx I[3];
        exp_moments(lam[i] * h, I);
        w2[i] = 0.5 * h * (I[2] - 3.0 * I[1] + 2.0 * I[0]);
        w1[i] = -h * (I[2] - 2.0 * I[1]);
        w0[i] = 0.5 * h * (I[2] - I[1]);
      }
    }

  double worst = 0.0;
  CVec r(ns);
  for (std::size_t n = 2; n < S.size(); n += 2) {
    const double tn = S[n].t;
    for (std::size_t i = 0; i < ns; ++i) r[i] = uh[n][i] - std::exp(tn * lam[i]) * uh[0][i];
    if (rule == DuhamelRule::simpson) {
      for (std::size_t k = 0; k <= n; ++k) {
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        const double f = w * h / 3.0;
        const double dt = tn - S[k].t;
        for (std::size_t i = 0; i < ns; ++i) r[i] -= f * std::exp(dt * lam[i]) * Nh[k][i];
      }
    } else {
      for (std::size_t k = 2; k <= n; k += 2) {
        const double dt = tn - S[k].t;
        for (std::size_t i = 0; i < ns; ++i)
          r[i] -= std::exp(dt * lam[i]) * (w2[i] * Nh[k][i] + w1[i] * Nh[k - 1][i] + w0[i] * Nh[k - 2][i]);
      }
    }
    worst = std::max(worst, std::sqrt(spectral_energy(g, r, [](double, double) { return 1.0; })) / n0);
  }
  return worst;
}

}  // namespace zkb
