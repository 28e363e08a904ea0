#include "zkb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "zkb/error.hpp"
#include "zkb/quadrature.hpp"

namespace zkb {

namespace {

constexpr double kPi = std::numbers::pi;
const double kPi32 = std::pow(kPi, 1.5);
constexpr cplx kI(0.0, 1.0);

void check_common(double t, double mu, int l) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error("kernel evaluation needs t > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error("kernel evaluation needs mu > 0");
  if (l < 0 || l > 2) throw Error("kernel derivative order must be 0, 1 or 2");
}

// exp(w) - 1 without cancellation for small |w|.
cplx expm1c(cplx w) {
  if (std::abs(w) < 1e-3) return w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0)));
  return std::exp(w) - 1.0;
}

enum class Cubic { with, without, difference };

// (t^{-1/2} / 4 pi^{3/2}) * 2 Re \int_0^inf xi^{l-1/2} e^{-mu t xi^2}
//     * e^{i(x xi - a/xi + pi/4 + l pi/2)} * C(xi) dxi,   a = y^2/(4t),
// which is the xi > 0 half of the reduced integral; the xi < 0 half is its
// complex conjugate.
KernelValue reduced(double x, double y, double t, double mu, int l, Cubic mode, const QuadratureSpec& spec) {
  check_common(t, mu, l);
  const double a = y * y / (4.0 * t);
  const double Xi = spec.gaussian_cutoff > 0.0 ? spec.gaussian_cutoff : std::sqrt(37.0 / (mu * t));
  double delta = spec.singularity_split > 0.0 ? spec.singularity_split : std::min(0.1, 0.5 / (std::abs(x) + 1.0));
  delta = std::min(delta, 0.5 * Xi);
  const double phase0 = kPi / 4.0 + l * kPi / 2.0;
  const double pref = 1.0 / (std::sqrt(t) * 4.0 * kPi32);
  const double tol = spec.abs_tol / (2.0 * pref);

  auto cubic = [&](cplx z) -> cplx {
    switch (mode) {
      case Cubic::with:
        return std::exp(kI * t * z * z * z);
      case Cubic::without:
        return 1.0;
      case Cubic::difference:
        return expm1c(kI * t * z * z * z);
    }
    return 1.0;
  };
  auto G = [&](cplx z) { return std::exp(-mu * t * z * z + kI * (x * z + phase0)) * cubic(z); };

  // Oscillation-adapted panels on [delta, Xi]: width <= pi / |phase'| with
  // phase' bounded by 3 t xi^2 + |x| + a/xi^2.
  std::vector<double> breaks{delta};
  const double c3 = mode == Cubic::without ? 0.0 : 3.0 * t;
  for (double s = delta; s < Xi;) {
    double h = kPi / (c3 * s * s + std::abs(x) + a / (s * s) + 1.0);
    s = std::min(s + std::min(h, 0.5), Xi);
    breaks.push_back(s);
  }
  auto fmain = [&](double s) -> cplx {
    return std::pow(s, l - 0.5) * std::exp(-kI * (a / s)) * G(cplx(s, 0.0));
  };
  const int budget = spec.max_subdivisions + int(breaks.size());
  quad::Result main = quad::integrate_breaks(fmain, breaks, 0.5 * tol, spec.rel_tol, budget);

  quad::Result near;
  if (a == 0.0) {
    // xi = s^2 removes the |xi|^{-1/2} singularity.
    auto fnear = [&](double s) -> cplx { return 2.0 * std::pow(s, 2 * l) * G(cplx(s * s, 0.0)); };
    near = quad::integrate(fnear, 0.0, std::sqrt(delta), 0.5 * tol, spec.rel_tol, spec.max_subdivisions);
  } else {
    // xi = 1/w, then w = W(1 - i sigma) with sigma = (u/(1-u))^2: the
    // e^{-i a w} factor turns into e^{-a W sigma}.
    const double W = 1.0 / delta;
    auto fnear = [&](double u) -> cplx {
      if (u >= 1.0) return 0.0;
      const double r = u / (1.0 - u);
      const double sig = r * r;
      const double dsig = 2.0 * u / std::pow(1.0 - u, 3);
      const cplx w = W * cplx(1.0, -sig);
      const cplx val = std::pow(w, -(l + 1.5)) * std::exp(-kI * a * w) * G(1.0 / w) * (-kI) * W * dsig;
      return std::isfinite(val.real()) && std::isfinite(val.imag()) ? val : cplx(0.0);
    };
    near = quad::integrate(fnear, 0.0, 1.0, 0.5 * tol, spec.rel_tol, spec.max_subdivisions);
  }

  const cplx I = main.value + near.value;
  KernelValue kv;
  kv.value = 2.0 * pref * I.real();
  kv.est_error = 2.0 * pref * (main.error + near.error);
  kv.route = Route::quadrature;
  if (!main.converged || !near.converged || !std::isfinite(kv.value))
    throw QuadratureError("reduced kernel quadrature did not converge at (x,y,t)=(" + std::to_string(x) + "," +
                              std::to_string(y) + "," + std::to_string(t) + ")",
                          kv.value, kv.est_error);
  return kv;
}

}  // namespace

LinearSymbol::LinearSymbol(double m) : mu(m) {
  if (!(m > 0.0)) throw Error("viscosity mu must be positive");
}

cplx LinearSymbol::lambda(double xi, double eta) const noexcept {
  return cplx(-mu * xi * xi, xi * xi * xi + xi * eta * eta);
}

const char* route_name(Route r) { return r == Route::quadrature ? "quadrature" : "fft2d"; }

cplx symbol_exp(double xi, double eta, double t, double mu) {
  // Modulus and phase separately so |value| = e^{-mu t xi^2} exactly.
  const double phase = t * (xi * xi * xi + xi * eta * eta);
  return std::exp(-mu * t * xi * xi) * cplx(std::cos(phase), std::sin(phase));
}

KernelValue eval_U(double x, double y, double t, double mu, int l, const QuadratureSpec& spec) {
  return reduced(x, y, t, mu, l, Cubic::with, spec);
}

KernelValue eval_V(double x, double y, double t, double mu, int l, const QuadratureSpec& spec) {
  return reduced(x, y, t, mu, l, Cubic::without, spec);
}

KernelValue eval_U_minus_V(double x, double y, double t, double mu, int l, const QuadratureSpec& spec) {
  return reduced(x, y, t, mu, l, Cubic::difference, spec);
}

KernelValue eval_Vstar(double X, double Y, double mu, int l, const QuadratureSpec& spec) {
  check_common(1.0, mu, l);
  // r = s^4:  V* = (1/(4 pi^{3/2} mu^{1/4})) Re \int_0^inf 4 (s^2/sqrt mu)^l
  //                e^{-s^4} e^{i(kappa s^2 - b/s^2 + pi/4 + l pi/2)} ds
  const double pref = 1.0 / (4.0 * kPi32 * std::pow(mu, 0.25));
  const double kappa = X / std::sqrt(mu);
  const double b = Y * Y * std::sqrt(mu) / 4.0;
  const double phi0 = kPi / 4.0 + l * kPi / 2.0;
  const double rmu = 1.0 / std::sqrt(mu);
  const double tol = spec.abs_tol / pref;
  const double S = std::pow(40.0, 0.25);

  auto f = [&](double s) -> cplx {
    const double s2 = s * s;
    const double ph = kappa * s2 - (s > 0.0 ? b / s2 : 0.0) + phi0;
    return 4.0 * std::pow(s2 * rmu, l) * std::exp(-s2 * s2) * cplx(std::cos(ph), std::sin(ph));
  };

  // Near s = 0 the b/s^2 phase oscillates without bound. In v = 1/s^2 the
  // piece [0, s0] is \int_{V0}^inf e^{-i b v} g(v) dv with
  // g(v) = 2 mu^{-l/2} v^{-3/2-l} exp(-v^{-2} + i kappa/v + i phi0); repeated
  // integration by parts gives e^{-i b V0} sum_n g^{(n)}(V0) / (i b)^{n+1}.
  double s0 = 0.0;
  cplx tail = 0.0;
  double tail_err = 0.0;
  if (b > 0.0) {
    const double V0 = std::max(400.0 / b, 16.0);
    s0 = 1.0 / std::sqrt(V0);
    const double v = V0, p = 1.5 + l;
    const cplx g = 2.0 * std::pow(mu, -0.5 * l) * std::pow(v, -p) *
                   std::exp(cplx(-1.0 / (v * v), kappa / v + phi0));
    const cplx L1 = -p / v + 2.0 / (v * v * v) - kI * kappa / (v * v);
    const cplx L2 = p / (v * v) - 6.0 / std::pow(v, 4) + 2.0 * kI * kappa / (v * v * v);
    const cplx L3 = -2.0 * p / (v * v * v) + 24.0 / std::pow(v, 5) - 6.0 * kI * kappa / std::pow(v, 4);
    const cplx d0 = g, d1 = g * L1, d2 = g * (L1 * L1 + L2), d3 = g * (L1 * L1 * L1 + 3.0 * L1 * L2 + L3);
    const cplx ib = kI * b;
    const cplx e = std::exp(-kI * (b * V0));
    tail = e * (d0 / ib + d1 / (ib * ib) + d2 / (ib * ib * ib) + d3 / (ib * ib * ib * ib));
    tail_err = std::abs(d3 / (ib * ib * ib * ib)) + 1e-16 * std::abs(tail);
  }

  std::vector<double> breaks{s0};
  for (double s = s0; s < S;) {
    const double near = b > 0.0 ? 2.0 * b / (s * s * s) : 0.0;
    double h = kPi / (2.0 * std::abs(kappa) * s + near + 1.0);
    s = std::min(s + std::min(h, 0.25), S);
    breaks.push_back(s);
  }
  const int budget = spec.max_subdivisions + int(breaks.size());
  quad::Result r = quad::integrate_breaks(f, breaks, tol, spec.rel_tol, budget);

  KernelValue kv;
  kv.value = pref * (r.value + tail).real();
  kv.est_error = pref * (r.error + tail_err);
  if (!r.converged || !std::isfinite(kv.value))
    throw QuadratureError("V* quadrature did not converge", kv.value, kv.est_error);
  return kv;
}

int required_samples(double L, double t, double mu) {
  const double ximax = std::sqrt(std::log(1e12) / (mu * t));
  int N = int(std::ceil(2.0 * L * ximax / kPi));
  N += N % 2;
  return std::max(N, 8);
}

namespace {

Field grid_kernel(const Grid& g, double t, double mu, double sigma) {
  if (!(t > 0.0) || !(mu > 0.0)) throw Error("eval_U_grid needs t > 0 and mu > 0");
  const double xm = g.max_xi();
  if (!(std::exp(-mu * t * xm * xm) < 1e-12)) {
    throw Error("eval_U_grid: grid does not resolve the symbol; need Nx >= " +
                std::to_string(required_samples(g.Lx(), t, mu)) + " for Lx = " + std::to_string(g.Lx()));
  }
  SpecField S(g);
  for (int k = 0; k < g.Nx(); ++k)
    for (int m = 0; m < g.Nyh(); ++m) {
      const double eta = g.eta(m);
      const double damp = sigma > 0.0 ? std::exp(-sigma * sigma * eta * eta / 4.0) : 1.0;
      S(k, m) = symbol_exp(g.xi(k), eta, t, mu) * (damp / (2.0 * kPi));
    }
  return to_physical(S);
}

}  // namespace

Field eval_U_grid(const Grid& grid, double t, double mu) { return grid_kernel(grid, t, mu, 0.0); }

Field eval_U_grid_mollified(const Grid& grid, double t, double mu, double sigma) {
  if (!(sigma > 0.0)) throw Error("mollifier width must be positive");
  return grid_kernel(grid, t, mu, sigma);
}

KernelValue eval_U_mollified(double x, double y, double t, double mu, double sigma, const QuadratureSpec& spec) {
  if (!(sigma > 0.0)) throw Error("mollifier width must be positive");
  // U(x, .) is smooth except at y = 0, so split the w-integral at w = y.
  const double R = 8.0 * sigma;
  std::vector<double> breaks{-R, R};
  if (y > -R && y < R) breaks.insert(breaks.begin() + 1, y);
  double inner_err = 0.0;
  auto f = [&](double w) -> cplx {
    const double gw = std::exp(-(w * w) / (sigma * sigma)) / (sigma * std::sqrt(kPi));
    if (gw < 1e-300) return 0.0;
    // Far in the Gaussian tail the kernel value is only needed coarsely.
    QuadratureSpec inner = spec;
    inner.abs_tol = std::min(1.0, 0.01 * spec.abs_tol / (gw * 2.0 * R));
    KernelValue u;
    try {
      u = eval_U(x, y - w, t, mu, 0, inner);
    } catch (const QuadratureError& e) {
      if (e.est_error() > inner.abs_tol) throw;
      u.value = e.value();
      u.est_error = e.est_error();
    }
    inner_err = std::max(inner_err, u.est_error * gw * 2.0 * R);
    return u.value * gw;
  };
  quad::Result r = quad::integrate_breaks(f, breaks, spec.abs_tol, spec.rel_tol, 200);
  KernelValue kv;
  kv.value = r.value.real();
  kv.est_error = r.error + inner_err;
  if (!r.converged) throw QuadratureError("mollified kernel quadrature did not converge", kv.value, kv.est_error);
  return kv;
}

double decay_bound(int l, double mu, double t) {
  check_common(t, mu, std::min(l, 2));
  const double e = (1.0 + 2.0 * l) / 4.0;
  return std::tgamma(e) / (4.0 * kPi32 * std::pow(mu, e)) * std::pow(t, -0.75 - 0.5 * l);
}

double remainder_bound(int l, double mu, double t) {
  check_common(t, mu, std::min(l, 2));
  const double e = (7.0 + 2.0 * l) / 4.0;
  return std::tgamma(e) / (4.0 * kPi32 * std::pow(mu, e)) * std::pow(t, -1.25 - 0.5 * l);
}

double lower_bound_constant(int l, double mu) {
  if (!(mu > 0.0) || l < 0) throw Error("lower_bound_constant needs mu > 0, l >= 0");
  const double e = (1.0 + 2.0 * l) / 4.0;
  return std::tgamma(e) * std::abs(std::cos(e * kPi)) / (4.0 * kPi32 * std::pow(mu, e));
}

double r_estimate_factor(int l, double alpha, double mu, double t) {
  if (!(t > 0.0) || !(mu > 0.0)) throw Error("r_estimate_factor needs t, mu > 0");
  if (l == 0 && !(alpha > 0.5)) throw Error("the l = 0 remainder estimate needs alpha > 1/2");
  const double g = l == 0 ? alpha - 1.5 : l - 1.5;
  const double e = (g + 1.0) / 2.0;
  return std::tgamma(e) * std::pow(mu * t, -e) / (16.0 * kPi32) * std::pow(t, -1.5);
}

cplx fresnel_slice(double xi, double y, double t) {
  if (xi == 0.0) throw Error("Fresnel slice undefined at xi=0");
  if (!(t > 0.0)) throw Error("Fresnel slice needs t > 0");
  const double s = xi > 0.0 ? 1.0 : -1.0;
  const double ph = -y * y / (4.0 * t * xi) + s * kPi / 4.0;
  return cplx(std::cos(ph), std::sin(ph)) / std::sqrt(2.0 * t * std::abs(xi));
}

cplx v_fourier_slice(double xi, double y, double t, double mu) {
  if (xi == 0.0) throw Error("V Fourier slice undefined at xi=0");
  if (!(t > 0.0)) throw Error("V Fourier slice needs t > 0");
  const double s = xi > 0.0 ? 1.0 : -1.0;
  const double ph = y * y / (4.0 * xi * t) - s * kPi / 4.0;
  return std::exp(-mu * t * xi * xi) * cplx(std::cos(ph), std::sin(ph)) / std::sqrt(2.0 * t * std::abs(xi));
}

}  // namespace zkb
