#pragma once

#include "zkb/field.hpp"

namespace zkb {

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const noexcept { return lhs <= rhs * (1.0 + 1e-12) + 1e-300; }
  double margin() const noexcept { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

// Throws HypothesisError("decay hypothesis violated") when the field does not
// vanish near the box edge (outer two rows/columns above 1e-6 of the sup).
void require_boundary_clean(const Field& f, double rel = 1e-6);

// ||f||_inf^2 <= 2(||f_x|| ||f_y|| + ||f|| ||f_xy||)
InequalityCheck gn_linf_check(const Field& f);
// ||f||_{2q}^{2q} <= (q!)^2 ||f||^2 ||f_x||^{q-1} ||f_y||^{q-1}
InequalityCheck gn_l2q_check(const Field& f, int q);
// ||FG|| <= C(s1,s2) ||F||_{H^{s1,0}} ||G||_{H^{0,s2}}
InequalityCheck product_l2_check(const Field& F, const Field& G, double s1, double s2);

// (1/2pi) ||(1+xi^2)^{-s1/2}||_{L^2} ||(1+eta^2)^{-s2/2}||_{L^2}
double product_constant(double s1, double s2);

}  // namespace zkb
