#include "zkb/inequalities.hpp"

#include <cmath>
#include <numbers>

#include "zkb/error.hpp"

namespace zkb {

void require_boundary_clean(const Field& f, double rel) {
  const double sup = linf(f);
  if (sup == 0.0) return;
  if (boundary_sup(f, 2) >= rel * sup) throw HypothesisError("decay hypothesis violated");
}

InequalityCheck gn_linf_check(const Field& f) {
  require_boundary_clean(f);
  const double s = linf(f);
  if (s == 0.0) return {};
  const double fx = l2(spectral_derivative(f, 1, 0));
  const double fy = l2(spectral_derivative(f, 0, 1));
  const double fxy = l2(spectral_derivative(f, 1, 1));
  return {s * s, 2.0 * (fx * fy + l2(f) * fxy)};
}

InequalityCheck gn_l2q_check(const Field& f, int q) {
  if (q < 1) throw Error("gn_l2q_check needs q >= 1");
  require_boundary_clean(f);
  if (linf(f) == 0.0) return {};
  double acc = 0.0;
  for (double v : f.values()) acc += std::pow(v * v, q);
  const double lhs = acc * f.grid().dx() * f.grid().dy();
  const double n = l2(f);
  double rhs = std::pow(std::tgamma(q + 1.0), 2) * n * n;
  if (q > 1) {
    const double fx = l2(spectral_derivative(f, 1, 0));
    const double fy = l2(spectral_derivative(f, 0, 1));
    rhs *= std::pow(fx, q - 1) * std::pow(fy, q - 1);
  }
  return {lhs, rhs};
}

double product_constant(double s1, double s2) {
  if (!(s1 > 0.5) || !(s2 > 0.5)) throw Error("product estimate needs s1, s2 > 1/2 (constant diverges)");
  // \int (1+x^2)^{-s} dx = sqrt(pi) Gamma(s-1/2)/Gamma(s)
  auto w = [](double s) { return std::sqrt(std::sqrt(std::numbers::pi) * std::tgamma(s - 0.5) / std::tgamma(s)); };
  return w(s1) * w(s2) / (2.0 * std::numbers::pi);
}

InequalityCheck product_l2_check(const Field& F, const Field& G, double s1, double s2) {
  const double C = product_constant(s1, s2);
  if (F.grid() != G.grid()) throw Error("product_l2_check: fields on different grids");
  Field prod = F;
  for (std::size_t n = 0; n < prod.values().size(); ++n) prod.values()[n] *= G.values()[n];
  const double lhs = l2(prod);
  const double rhs = C * norm(F, NormKind::Hs1s2(s1, 0.0)) * norm(G, NormKind::Hs1s2(0.0, s2));
  return {lhs, rhs};
}

}  // namespace zkb
