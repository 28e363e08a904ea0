#include "zkb/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zkb/error.hpp"
#include "zkb/inequalities.hpp"
#include "zkb/solver.hpp"

namespace zkb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZetaHalf = -1.4603545088095868;  // zeta(1/2)

void check_j(int j, int jmax) {
  if (j < 0 || j > jmax) throw Error("derivative order j must be in 0.." + std::to_string(jmax));
}

Field dy_power(const Field& u0, int j) { return j == 0 ? u0 : spectral_derivative(u0, 0, j); }

// Copy of f centred in a box `pad` times longer in x (zero outside).
Field pad_x(const Field& f, int pad) {
  if (pad == 1) return f;
  const Grid& g = f.grid();
  Grid gp(pad * g.Lx(), g.Ly(), pad * g.Nx(), g.Ny());
  Field out(gp);
  const int off = (pad - 1) * g.Nx() / 2;
  for (int i = 0; i < g.Nx(); ++i)
    for (int j = 0; j < g.Ny(); ++j) out(i + off, j) = f(i, j);
  return out;
}

// Cubic Lagrange interpolation of the spectrum along eta on column k; zero
// outside the resolved band.
cplx eta_interp(const SpecField& S, int k, double eta) {
  const Grid& g = S.grid();
  const int Ny = g.Ny();
  const double s = eta / g.deta() + Ny / 2;
  if (!(s >= 0.0) || s > Ny - 1) return 0.0;
  const int q0 = std::min(int(std::floor(s)), Ny - 2);
  const double f = s - q0;
  const double w[4] = {-f * (f - 1.0) * (f - 2.0) / 6.0, (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
                       -(f + 1.0) * f * (f - 2.0) / 2.0, (f + 1.0) * f * (f - 1.0) / 6.0};
  cplx r = 0.0;
  for (int d = 0; d < 4; ++d) {
    const int q = q0 - 1 + d;
    if (q < 0 || q > Ny - 1) continue;
    const int m = ((q - Ny / 2) % Ny + Ny) % Ny;
    r += w[d] * S.full(k, m);
  }
  return r;
}

double max_abs_coeff(const SpecField& S) {
  double m = 0.0;
  for (const auto& c : S.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

double Marginal::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * dy;
}

Marginal marginal(const Field& u0, int j) {
  check_j(j, 2);
  require_boundary_clean(u0);
  const Grid& g = u0.grid();
  const Field f = dy_power(u0, j);
  Marginal M;
  M.j = j;
  M.dy = g.dy();
  M.y = g.ys();
  M.values.assign(std::size_t(g.Ny()), 0.0);
  for (int i = 0; i < g.Nx(); ++i)
    for (int jj = 0; jj < g.Ny(); ++jj) M.values[std::size_t(jj)] += f(i, jj);
  for (auto& v : M.values) v *= g.dx();
  return M;
}

double eval_mathV(const Marginal& M, double x, double y, double t, double mu, int l, const QuadratureSpec& spec) {
  double peak = 0.0;
  for (double v : M.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t m = 0; m < M.values.size(); ++m) {
    if (std::abs(M.values[m]) < 1e-15 * peak) continue;
    s += eval_V(x, y - M.y[m], t, mu, l, spec).value * M.values[m];
  }
  return s * M.dy;
}

double eval_mathV(const Field& u0, int j, double x, double y, double t, double mu, int l) {
  return eval_mathV(marginal(u0, j), x, y, t, mu, l);
}

Field mathV_grid(const Marginal& M, const Grid& grid, double t, double mu, int l) {
  if (M.values.size() != std::size_t(grid.Ny()) || std::abs(M.dy - grid.dy()) > 1e-14 * grid.dy())
    throw Error("marginal does not match the grid's y lines");
  if (l < 0 || l > 2) throw Error("mathV_grid: l must be in 0..2");
  Field src(grid);
  for (int j = 0; j < grid.Ny(); ++j) src(grid.Nx() / 2, j) = M.values[std::size_t(j)] / grid.dx();
  CVec c = raw_forward(src);
  const int Nyh = grid.Nyh();
  for (int k = 0; k < grid.Nx(); ++k) {
    const double xi = grid.xi(k);
    const cplx dl = (k == grid.Nx() / 2 && l % 2) ? cplx(0.0) : std::pow(cplx(0.0, xi), l);
    for (int m = 0; m < Nyh; ++m) {
      const double eta = grid.eta(m);
      c[std::size_t(k) * Nyh + m] *= dl * std::exp(t * cplx(-mu * xi * xi, xi * eta * eta));
    }
  }
  return raw_inverse(grid, c);
}

SliceFunctional::SliceFunctional(const Field& u0, int j, int pad) : Lx_(u0.grid().Lx()), j_(j) {
  check_j(j, 1);
  if (pad < 1) throw Error("padding factor must be >= 1");
  spec_ = std::make_shared<const SpecField>(to_spectral(pad_x(dy_power(u0, j), pad)));
  peak_ = max_abs_coeff(*spec_);
}

SliceValue SliceFunctional::operator()(double w) const {
  const SpecField& S = *spec_;
  const Grid& g = S.grid();
  const int N = g.Nx();
  const double dxi = g.dxi(), etamax = g.max_eta();
  const double peak = peak_;
  SliceValue out;
  if (peak == 0.0) return out;

  CVec gk(static_cast<std::size_t>(N)), h(static_cast<std::size_t>(N));
  double acc = 0.0;
  for (int k = 0; k < N; ++k) {
    const double xi = g.xi(k);
    cplx v = 0.0;
    if (k == N / 2) {
      v = 0.0;
    } else if (xi == 0.0) {
      // Limit along the hyperbola: the eta argument runs off to infinity.
      v = w == 0.0 ? S(0, 0) : cplx(0.0);
    } else {
      const double eta = w / (2.0 * xi);
      if (std::abs(eta) > etamax) {
        const double edge = std::max(std::abs(S.full(k, g.Ny() / 2)), std::abs(S.full(k, g.Ny() / 2 - 1)));
        if (edge > 1e-8 * peak) out.band_exceeded = true;
      } else {
        v = eta_interp(S, k, eta);
      }
    }
    gk[std::size_t(k)] = v;
    const double K = xi == 0.0 ? 2.0 * Lx_ : 2.0 * std::sin(Lx_ * xi) / xi;
    acc += (v * K).real();
  }
  out.value = acc * dxi;

  for (int k = 0; k < N; ++k) gk[std::size_t(k)] *= (k % 2 ? -1.0 : 1.0);
  fft::c2c_1d(N, gk.data(), h.data(), +1);
  double inner = 0.0, outer = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = g.x(i);
    if (std::abs(x) > Lx_) continue;
    const double a = std::abs(h[std::size_t(i)]);
    inner += a;
    if (std::abs(x) > 0.9 * Lx_) outer += a;
  }
  out.quality = inner > 0.0 ? outer / inner : 0.0;
  return out;
}

SliceValue eval_M_functional(const Field& u0, int j, double w) { return SliceFunctional(u0, j)(w); }

double psi_slice_argument(double y, double t, PsiOrientation o) {
  return o == PsiOrientation::standard ? -y / t : y / t;
}

ProfileEval eval_psi_with_amplitude(double amplitude, double x, double y, double t, double mu, int l, PsiOrientation o,
                                    const QuadratureSpec& spec) {
  if (!(t > 0.0)) throw Error("eval_psi needs t > 0");
  ProfileEval p;
  p.t = t;
  p.amplitude = amplitude;
  const double xs = o == PsiOrientation::standard ? x : -x;
  p.kernel = amplitude == 0.0 ? 0.0 : eval_V(xs, y, t, mu, l, spec).value;
  p.value = p.amplitude * p.kernel;
  return p;
}

ProfileEval eval_psi(const SliceFunctional& M, double x, double y, double t, double mu, int l, PsiOrientation o,
                     const QuadratureSpec& spec) {
  if (!(t > 0.0)) throw Error("eval_psi needs t > 0");
  return eval_psi_with_amplitude(M(psi_slice_argument(y, t, o)).value, x, y, t, mu, l, o, spec);
}

ProfileEval eval_psi(const Field& u0, int j, double x, double y, double t, double mu, int l, PsiOrientation o) {
  return eval_psi(SliceFunctional(u0, j), x, y, t, mu, l, o);
}

double WRSplit::sup_R() const {
  double s = 0.0;
  for (double r : R) s = std::max(s, std::abs(r));
  return s;
}

double y2_weighted_l1(const Field& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int i = 0; i < g.Nx(); ++i)
    for (int j = 0; j < g.Ny(); ++j) s += g.y(j) * g.y(j) * std::abs(f(i, j));
  return s * g.dx() * g.dy();
}

WRSplit wj_rj_split(const Field& u0, int j, double y, double t, double mu, const WROptions& opt) {
  check_j(j, 2);
  if (!(t > 0.0) || !(mu > 0.0)) throw Error("wj_rj_split needs t > 0 and mu > 0");
  if (opt.l < 0 || opt.l > 2) throw Error("wj_rj_split: l must be in 0..2");
  if (opt.pad < 1) throw Error("wj_rj_split: pad must be >= 1");
  const Grid& g = u0.grid();
  const int l = opt.l;
  const Field f = dy_power(u0, j);

  WRSplit out;
  out.t = t;
  out.l = l;
  try {
    if (l == 0) {
      try {
        out.data_norm = y2_weighted_l1(fractional_dx(f, -opt.alpha, ZeroModePolicy::strict));
      } catch (const HypothesisError& e) {
        throw HypothesisError(std::string("weight hypothesis: y^2 D_x^{-alpha} d_y^j u0 is not integrable (") +
                              e.what() + ")");
      }
    } else {
      out.data_norm = y2_weighted_l1(f);
    }
    if (!std::isfinite(out.data_norm)) throw HypothesisError("weight hypothesis: weighted data norm is not finite");
  } catch (const HypothesisError&) {
    if (opt.enforce_hypothesis) throw;
    out.data_norm = std::numeric_limits<double>::infinity();
  }
  out.bound = r_estimate_factor(l, opt.alpha, mu, t) * out.data_norm;

  int jy = int(std::lround((y + g.Ly()) / g.dy()));
  jy = std::clamp(jy, 0, g.Ny() - 1);
  out.y = g.y(jy);
  const double yv = std::abs(out.y) < 1e-12 * g.dy() ? 0.0 : out.y;

  // d_x^l v on the line y.
  {
    CVec c = raw_forward(f);
    const int Nyh = g.Nyh();
    for (int k = 0; k < g.Nx(); ++k) {
      const double xi = g.xi(k);
      const cplx dl = (k == g.Nx() / 2 && l % 2) ? cplx(0.0) : std::pow(cplx(0.0, xi), l);
      for (int m = 0; m < Nyh; ++m) {
        const double eta = g.eta(m);
        c[std::size_t(k) * Nyh + m] *= dl * std::exp(t * cplx(-mu * xi * xi, xi * eta * eta));
      }
    }
    const Field v = raw_inverse(g, c);
    out.x = g.xs();
    out.v.resize(std::size_t(g.Nx()));
    for (int i = 0; i < g.Nx(); ++i) out.v[std::size_t(i)] = v(i, jy);
  }

  // d_x^l W on the padded line, restricted to the original x samples.
  const SpecField S = to_spectral(pad_x(f, opt.pad));
  const Grid& gp = S.grid();
  const int Np = gp.Nx();
  const double dxi = gp.dxi();
  CVec Wk(static_cast<std::size_t>(Np)), Wx(static_cast<std::size_t>(Np));
  for (int k = 0; k < Np; ++k) {
    const double xi = gp.xi(k);
    cplx v = 0.0;
    if (k == Np / 2) {
      v = 0.0;
    } else if (xi == 0.0) {
      // The slice behaves like c_pm |xi|^{-1/2} at 0 when y = 0; this sample
      // carries the missing -zeta(1/2) c sqrt(dxi) of each half-line sum.
      if (l == 0 && yv == 0.0) v = -kZetaHalf * S(0, 0) / (std::sqrt(t) * std::sqrt(dxi));
    } else {
      v = v_fourier_slice(-xi, yv, t, mu) * eta_interp(S, k, -yv / (2.0 * xi * t)) * std::pow(cplx(0.0, xi), l);
    }
    Wk[std::size_t(k)] = v * (k % 2 ? -1.0 : 1.0);
  }
  fft::c2c_1d(Np, Wk.data(), Wx.data(), +1);
  const double scale = dxi / std::sqrt(2.0 * kPi);
  const int off = (opt.pad - 1) * g.Nx() / 2;
  out.W.resize(std::size_t(g.Nx()));
  out.R.resize(std::size_t(g.Nx()));
  for (int i = 0; i < g.Nx(); ++i) {
    out.W[std::size_t(i)] = scale * Wx[std::size_t(i + off)].real();
    out.R[std::size_t(i)] = out.v[std::size_t(i)] - out.W[std::size_t(i)];
  }
  return out;
}

}  // namespace zkb
