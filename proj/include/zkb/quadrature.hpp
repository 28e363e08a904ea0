#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace zkb::quad {

using cplx = std::complex<double>;

struct Result {
  cplx value{0.0};
  double error = 0.0;
  int evals = 0;
  bool converged = true;
};

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half, centre last).
struct GK15 {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class F>
void gk15(F& f, double a, double b, cplx& val, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx rk = fc * GK15::wk[7];
  cplx rg = fc * GK15::wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * GK15::xk[std::size_t(j)];
    const cplx s = f(c - dx) + f(c + dx);
    rk += GK15::wk[std::size_t(j)] * s;
    if (j % 2 == 1) rg += GK15::wg[std::size_t(j / 2)] * s;
  }
  val = rk * h;
  err = std::abs((rk - rg) * h);
}

// Globally adaptive bisection starting from the panels given by `breaks`
// (sorted): always split the panel with the largest error estimate until
// sum(err) <= max(abs_tol, rel_tol*|I|). `max_subdiv` counts extra splits.
template <class F>
Result integrate_breaks(F&& f, const std::vector<double>& breaks, double abs_tol, double rel_tol,
                        int max_subdiv = 400) {
  struct Panel {
    double a, b;
    cplx v;
    double e;
    bool operator<(const Panel& o) const { return e < o.e; }
  };
  Result r;
  if (breaks.size() < 2) return r;
  std::priority_queue<Panel> heap;
  cplx total = 0.0;
  double err = 0.0;
  for (std::size_t n = 0; n + 1 < breaks.size(); ++n) {
    if (!(breaks[n + 1] > breaks[n])) continue;
    Panel p{breaks[n], breaks[n + 1], 0.0, 0.0};
    gk15(f, p.a, p.b, p.v, p.e);
    r.evals += 15;
    total += p.v;
    err += p.e;
    heap.push(p);
  }
  int splits = 0;
  while (!heap.empty() && err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (splits >= max_subdiv) {
      r.converged = false;
      break;
    }
    Panel top = heap.top();
    const double m = 0.5 * (top.a + top.b);
    if (!(m > top.a && m < top.b)) {  // panel below floating-point resolution
      r.converged = false;
      break;
    }
    heap.pop();
    Panel l{top.a, m, 0.0, 0.0}, rr{m, top.b, 0.0, 0.0};
    gk15(f, l.a, l.b, l.v, l.e);
    gk15(f, rr.a, rr.b, rr.v, rr.e);
    r.evals += 30;
    total += l.v + rr.v - top.v;
    err += l.e + rr.e - top.e;
    heap.push(l);
    heap.push(rr);
    ++splits;
  }
  // Exact re-summation; the running totals above only steer the loop.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().v;
    err += heap.top().e;
    heap.pop();
  }
  r.value = total;
  r.error = err;
  return r;
}

template <class F>
Result integrate(F&& f, double a, double b, double abs_tol, double rel_tol, int max_subdiv = 400) {
  return integrate_breaks(f, std::vector<double>{a, b}, abs_tol, rel_tol, max_subdiv);
}

}  // namespace zkb::quad
