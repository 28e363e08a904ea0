#pragma once

#include <complex>

#include "zkb/field.hpp"

namespace zkb {

// exp(t*lambda), lambda = -mu xi^2 + i(xi^3 + xi eta^2)
struct LinearSymbol {
  double mu;
  explicit LinearSymbol(double mu);
  cplx lambda(double xi, double eta) const noexcept;
};

struct QuadratureSpec {
  double abs_tol = 1e-12;   // on the returned kernel value
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  double singularity_split = 0.0;  // delta; 0 selects min(0.1, 0.5/(|x|+1))
  double gaussian_cutoff = 0.0;    // Xi; 0 selects sqrt(37/(mu t))
};

enum class Route { quadrature, fft2d };
const char* route_name(Route r);

struct KernelValue {
  double value = 0.0;
  double est_error = 0.0;
  Route route = Route::quadrature;
};

cplx symbol_exp(double xi, double eta, double t, double mu);

// d_x^l U(x, y, t), l in {0,1,2}, through the one-dimensional reduced integral.
KernelValue eval_U(double x, double y, double t, double mu, int l, const QuadratureSpec& spec = {});
// d_x^l V(x, y, t): the same integral without the xi^3 phase.
KernelValue eval_V(double x, double y, double t, double mu, int l, const QuadratureSpec& spec = {});
// d_x^l (U - V) from a single integral of the difference (no cancellation).
KernelValue eval_U_minus_V(double x, double y, double t, double mu, int l, const QuadratureSpec& spec = {});

// d_X^l V*(X, Y) through the r = s^4 form; an independent path from eval_V.
KernelValue eval_Vstar(double X, double Y, double mu, int l, const QuadratureSpec& spec = {});

// U on the periodic grid by inverse DFT of symbol_exp/(2 pi).
Field eval_U_grid(const Grid& grid, double t, double mu);
// Same with the eta-symbol multiplied by exp(-sigma^2 eta^2/4), i.e. U
// convolved in y with exp(-y^2/sigma^2)/(sigma sqrt(pi)).
Field eval_U_grid_mollified(const Grid& grid, double t, double mu, double sigma);
// Quadrature counterpart: \int U(x, y-w, t) G_sigma(w) dw.
KernelValue eval_U_mollified(double x, double y, double t, double mu, double sigma,
                             const QuadratureSpec& spec = {});
// Grid resolution needed so that exp(-mu t max_xi^2) < 1e-12.
int required_samples(double L, double t, double mu);

double decay_bound(int l, double mu, double t);
double remainder_bound(int l, double mu, double t);
// Gamma((1+2l)/4) |cos((1+2l) pi/4)| / (4 pi^{3/2} mu^{(1+2l)/4})
double lower_bound_constant(int l, double mu);
// Explicit constant of the W/R remainder (without the data norm); see
// profiles.hpp for the data-dependent factor.
double r_estimate_factor(int l, double alpha, double mu, double t);

// exp(-i y^2/(4 t xi) + i pi/4 sgn xi) / sqrt(2 t |xi|)
cplx fresnel_slice(double xi, double y, double t);
// exp(-mu t xi^2 + i y^2/(4 xi t) - i pi/4 sgn xi) / sqrt(2 t |xi|)
//   = 2 pi F_x[V(-x, y, t)](xi)
cplx v_fourier_slice(double xi, double y, double t, double mu);

}  // namespace zkb
