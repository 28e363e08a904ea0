#pragma once

#include <memory>
#include <vector>

#include "zkb/field.hpp"
#include "zkb/kernels.hpp"

namespace zkb {

// M_j(y) = \int d_y^j u0(x, y) dx on the grid lines.
struct Marginal {
  std::vector<double> y;
  std::vector<double> values;
  int j = 0;
  double dy = 0.0;
  double integral() const;
};

Marginal marginal(const Field& u0, int j);

// d_x^l of \int V(x, y - w, t) M_j(w) dw, trapezoid over the marginal samples.
double eval_mathV(const Marginal& M, double x, double y, double t, double mu, int l, const QuadratureSpec& spec = {});
double eval_mathV(const Field& u0, int j, double x, double y, double t, double mu, int l);

// Same object on a whole grid: the no-cubic semigroup applied to the line
// source delta(x) M_j(y), i.e. the discrete delta at x = 0 on `grid`.
Field mathV_grid(const Marginal& M, const Grid& grid, double t, double mu, int l);

struct SliceValue {
  double value = 0.0;
  // Share of \int |h| carried by the outer 10% of [-Lx, Lx], where h is the
  // inverse x-transform of the slice.
  double quality = 0.0;
  // The hyperbola eta = w/(2 xi) left the resolved band somewhere.
  bool band_exceeded = false;
};

// w -> sqrt(2 pi) \int_{-Lx}^{Lx} F_xi^{-1}[ F[d_y^j u0](xi, w/(2 xi)) ](x) dx.
// The spectrum is computed once on an x-zero-padded copy of u0 (refining
// xi by `pad`); evaluation interpolates it cubically along eta.
class SliceFunctional {
public:
  SliceFunctional(const Field& u0, int j, int pad = 16);
  SliceValue operator()(double w) const;
  double Lx() const noexcept { return Lx_; }

private:
  double Lx_;
  int j_;
  double peak_ = 0.0;
  std::shared_ptr<const SpecField> spec_;
};

SliceValue eval_M_functional(const Field& u0, int j, double w);

// psi_j(x,y,t) = M[d_y^j u0](-y/t) d_x^l V(x, y, t). The mirrored orientation evaluates the
// variant M[d_y^j u0](y/t) d_x^l V(-x, y, t) for comparison.
enum class PsiOrientation { standard, mirrored };

struct ProfileEval {
  double value = 0.0;
  double amplitude = 0.0;  // M-functional factor
  double kernel = 0.0;     // d_x^l V factor
  double t = 0.0;
};

ProfileEval eval_psi(const SliceFunctional& M, double x, double y, double t, double mu, int l,
                     PsiOrientation o = PsiOrientation::standard, const QuadratureSpec& spec = {});
ProfileEval eval_psi(const Field& u0, int j, double x, double y, double t, double mu, int l,
                     PsiOrientation o = PsiOrientation::standard);

// Argument w of the M-functional factor of psi at (y, t).
double psi_slice_argument(double y, double t, PsiOrientation o = PsiOrientation::standard);
// psi with the M-functional factor already evaluated at psi_slice_argument(y, t, o).
ProfileEval eval_psi_with_amplitude(double amplitude, double x, double y, double t, double mu, int l,
                                    PsiOrientation o = PsiOrientation::standard, const QuadratureSpec& spec = {});

struct WROptions {
  int l = 0;
  double alpha = 0.6;
  int pad = 2;  // x zero-padding used for the W spectrum
  // When false a failed weight hypothesis is not an error: the split is
  // still computed and `bound` is left infinite.
  bool enforce_hypothesis = true;
};

struct WRSplit {
  double y = 0.0;  // grid line actually used
  double t = 0.0;
  int l = 0;
  std::vector<double> x;
  std::vector<double> v;  // d_x^l d_y^j v(x, y, t)
  std::vector<double> W;  // d_x^l W_j
  std::vector<double> R;  // d_x^l R_j = v - W
  double data_norm = 0.0;  // ||y^2 D_x^{-alpha} d_y^j u0||_1 (l = 0) or ||y^2 d_y^j u0||_1
  double bound = 0.0;      // explicit bound for sup |d_x^l R_j|
  double sup_R() const;
};

// Requires the weighted data norm of the remainder estimate to be finite on
// the grid; otherwise HypothesisError("weight hypothesis ...").
WRSplit wj_rj_split(const Field& u0, int j, double y, double t, double mu, const WROptions& opt = {});

// \int\int y^2 |f| dx dy
double y2_weighted_l1(const Field& f);

}  // namespace zkb
