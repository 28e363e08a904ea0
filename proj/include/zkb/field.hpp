#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>

#include "zkb/fft.hpp"
#include "zkb/grid.hpp"

namespace zkb {

// Real samples u(x_i, y_j), row-major with y fastest.
class Field {
public:
  explicit Field(Grid g);
  Field(Grid g, RVec values);

  const Grid& grid() const noexcept { return grid_; }
  double operator()(int i, int j) const noexcept { return v_[grid_.index(i, j)]; }
  double& operator()(int i, int j) noexcept { return v_[grid_.index(i, j)]; }
  const RVec& values() const noexcept { return v_; }
  RVec& values() noexcept { return v_; }
  const double* data() const noexcept { return v_.data(); }
  double* data() noexcept { return v_.data(); }

  static Field from_function(const Grid& g, const std::function<double(double, double)>& f);

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);
  bool all_finite() const noexcept;

private:
  Grid grid_;
  RVec v_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

// Continuum-normalized Fourier coefficients
//   c(xi_k, eta_m) = (1/2pi) \int\int u e^{-i(x xi + y eta)} dx dy
// on the half plane m = 0..Ny/2 (the rest follows from Hermitian symmetry).
// The x_0 = -Lx offset is folded into the coefficients, so c is a smooth
// function of (xi, eta) for smooth compactly supported u.
class SpecField {
public:
  explicit SpecField(Grid g);
  SpecField(Grid g, CVec coeffs);

  const Grid& grid() const noexcept { return grid_; }
  cplx operator()(int k, int m) const noexcept { return c_[idx(k, m)]; }
  cplx& operator()(int k, int m) noexcept { return c_[idx(k, m)]; }
  // Coefficient for any m in DFT order (0..Ny-1), via Hermitian symmetry.
  cplx full(int k, int m) const noexcept;
  const CVec& coeffs() const noexcept { return c_; }
  CVec& coeffs() noexcept { return c_; }

private:
  std::size_t idx(int k, int m) const noexcept { return std::size_t(k) * std::size_t(grid_.Nyh()) + std::size_t(m); }
  Grid grid_;
  CVec c_;
};

SpecField to_spectral(const Field& f);
Field to_physical(const SpecField& F);

// Raw (unscaled, no phase) DFT helpers shared by solver and profiles.
CVec raw_forward(const Field& f);
Field raw_inverse(const Grid& g, const CVec& raw);  // includes the 1/(Nx Ny)

enum class Axis { x, y };

Field spectral_derivative(const Field& f, Axis axis, int order);
// Mixed derivative d_x^a d_y^b with one transform pair.
Field spectral_derivative(const Field& f, int order_x, int order_y);

enum class ZeroModePolicy { strict, zero_out };

// |xi|^gamma along x.
Field fractional_dx(const Field& f, double gamma, ZeroModePolicy policy = ZeroModePolicy::zero_out);

struct NormKind {
  enum class Tag { L2, Lq, Linf, Hs, Hs1s2 };
  Tag tag = Tag::L2;
  int q = 2;
  double s = 0.0, s1 = 0.0, s2 = 0.0;

  static NormKind L2() { return {}; }
  static NormKind Lq(int q);
  static NormKind Linf() { return {Tag::Linf}; }
  static NormKind Hs(double s);
  static NormKind Hs1s2(double s1, double s2);
};

struct NormResult {
  double value = 0.0;
  bool unresolved = false;  // Sobolev kinds only: spectral tail too heavy
};

NormResult norm_ex(const Field& f, const NormKind& kind);
double norm(const Field& f, const NormKind& kind);

double l2(const Field& f);
double linf(const Field& f);
double l1(const Field& f);
double integral(const Field& f);

// Sup over the outermost `ring` rows and columns.
double boundary_sup(const Field& f, int ring = 2);
// Fraction of sum u^2 carried by the outermost `ring` rows and columns.
double boundary_energy_fraction(const Field& f, int ring = 2);

// sup_xi (1+xi^2)^{a/2} e^{-mu t xi^2}
double smoothing_factor(double a, double mu, double t);

// Binary dump (magic "ZKB1", Nx, Ny, Lx, Ly as 64-bit, row-major f64, LE).
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);
void write_field_csv(std::ostream& os, const Field& f);

}  // namespace zkb
