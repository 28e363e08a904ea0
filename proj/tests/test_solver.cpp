#include <cmath>

#include "doctest.h"
#include "zkb/error.hpp"
#include "zkb/solver.hpp"

using namespace zkb;

namespace {

const double kPi = 3.14159265358979323846;

Field gaussian(const Grid& g, double a = 1.0) {
  return Field::from_function(g, [a](double x, double y) { return a * std::exp(-(x * x + y * y)); });
}

SimConfig config(const Grid& g, Equation eq, double dt, double t_end, std::vector<double> snaps = {}) {
  SimConfig c{eq, g, dt, t_end, std::move(snaps), 0.0, 1.0};
  return c;
}

// Test-side propagator: multiply the continuum coefficients by the symbol.
Field propagate_oracle(const Field& u0, double t, double mu) {
  SpecField F = to_spectral(u0);
  const Grid& g = u0.grid();
  for (int k = 0; k < g.Nx(); ++k)
    for (int m = 0; m < g.Nyh(); ++m) {
      const double xi = g.xi(k), eta = g.eta(m);
      const double ph = t * (xi * xi * xi + xi * eta * eta);
      F(k, m) *= std::exp(-mu * t * xi * xi) * cplx(std::cos(ph), std::sin(ph));
    }
  return to_physical(F);
}

}  // namespace

TEST_CASE("configuration checks name their key") {
  const Grid g(8, 8, 32, 32);
  auto key_of = [](const SimConfig& c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  };
  CHECK(key_of(config(g, {0.0, 1, 2}, 0.01, 1)) == "equation.mu");
  CHECK(key_of(config(g, {1.0, 1, 0}, 0.01, 1)) == "equation.p");
  CHECK(key_of(config(g, {1.0, 1, 2}, 0.0, 1)) == "time.dt");
  CHECK(key_of(config(g, {1.0, 1, 2}, 0.01, -1)) == "time.t_end");
  CHECK(key_of(config(g, {1.0, 1, 2}, 0.01, 1, {0.5, 0.2})) == "time.snapshots");
  CHECK(key_of(config(g, {1.0, 1, 2}, 0.01, 1, {2.0})) == "time.snapshots");
  SimConfig c = config(g, {1.0, 1, 2}, 0.01, 1);
  c.dealias_pad = 1.2;
  CHECK(key_of(c) == "time.dealias_pad");
  c.dealias_pad = 0.0;
  CHECK(c.pad() == 2.0);
  CHECK(key_of(c).empty());
}

TEST_CASE("linear propagation") {
  const Grid g(16, 16, 96, 96);
  const Field u0 = Field::from_function(g, [](double x, double y) { return (1 + x) * std::exp(-(x * x + 2 * y * y)); });
  const Field same = linear_propagate(u0, 0.0, 1.0);
  CHECK(same.values() == u0.values());
  const Field a = linear_propagate(linear_propagate(u0, 1.0, 1.0), 1.0, 1.0);
  const Field b = linear_propagate(u0, 2.0, 1.0);
  CHECK(linf(a - b) < 1e-12);
  CHECK(linf(b - propagate_oracle(u0, 2.0, 1.0)) < 1e-12);
  CHECK(l2(b) < l2(u0));
  CHECK(l2(linear_propagate(u0, 0.5, 1.0)) < l2(u0));
  CHECK_THROWS_AS(linear_propagate(u0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(linear_propagate(u0, 1.0, 0.0), Error);
  // without the cubic term, y-independent data only feels the heat flow
  const Field ux = Field::from_function(g, [](double x, double) { return std::cos(kPi * x / 16); });
  const double k = kPi / 16;
  const Field vx = linear_propagate(ux, 3.0, 1.0, Dispersion::no_cubic);
  CHECK(linf(vx - std::exp(-k * k * 3.0) * ux) < 1e-13);
}

TEST_CASE("nonlinear term") {
  const Grid g(kPi, kPi, 32, 32);
  const Field s = Field::from_function(g, [](double x, double) { return std::sin(x); });
  const Field n = nonlinear_term(s, {1.0, 3.0, 1});
  double err = 0.0;
  for (int i = 0; i < g.Nx(); ++i)
    for (int j = 0; j < g.Ny(); ++j) err = std::max(err, std::abs(n(i, j) + 1.5 * std::sin(2 * g.x(i))));
  CHECK(err < 1e-10);
  Field c(g);
  for (auto& v : c.values()) v = 0.7;
  CHECK(linf(nonlinear_term(c, {1.0, 1.0, 2})) < 1e-13);
  CHECK(linf(nonlinear_term(s, {1.0, 0.0, 2})) == 0.0);
  // p = 2 on a resolved field: -(1/3) d_x(u^3) = -u^2 u_x
  const Grid h(16, 16, 256, 256);
  const Field u = gaussian(h);
  const Field m = nonlinear_term(u, {1.0, 1.0, 2});
  double e2 = 0.0;
  for (int i = 0; i < h.Nx(); ++i)
    for (int j = 0; j < h.Ny(); ++j) {
      const double x = h.x(i), y = h.y(j), v = std::exp(-(x * x + y * y));
      e2 = std::max(e2, std::abs(m(i, j) - 2 * x * v * v * v));
    }
  CHECK(e2 < 1e-10);
  CHECK(std::abs(integral(m)) < 1e-13);
  Field big(g);
  for (auto& v : big.values()) v = 1e200;
  CHECK_THROWS_WITH_AS(nonlinear_term(big, {1.0, 1.0, 3}), doctest::Contains("amplitude blowup"), NumericalError);
}

TEST_CASE("single steps") {
  const Grid g(16, 16, 96, 96);
  const Field u0 = gaussian(g);
  const SimConfig lin = config(g, {1.0, 0.0, 2}, 0.05, 1);
  CHECK(linf(advance(u0, 0.0, lin) - linear_propagate(u0, 0.05, 1.0)) < 1e-12);
  const SimConfig nl = config(g, {1.0, 1.0, 2}, 0.05, 1);
  CHECK(linf(advance(Field(g), 0.0, nl)) == 0.0);
  SimConfig guarded = nl;
  guarded.boundary_guard = 1e-6;
  const Field edge = Field::from_function(g, [](double x, double y) { return std::exp(-((x - 15) * (x - 15) + y * y)); });
  CHECK_THROWS_WITH_AS(advance(edge, 0.0, guarded), doctest::Contains("boundary contamination"), BoundaryError);
  Field bad = u0;
  bad(3, 3) = std::nan("");
  CHECK_THROWS_WITH_AS(advance(bad, 0.0, nl), doctest::Contains("unstable step"), NumericalError);
}

TEST_CASE("linear runs follow the semigroup") {
  const Grid g(16, 16, 96, 96);
  const Field u0 = gaussian(g);
  const Trajectory tr = run(u0, config(g, {1.0, 0.0, 2}, 0.03, 1.0, {0.0, 0.1, 0.35, 1.0}));
  REQUIRE(tr.snapshots.size() == 4);
  for (const auto& s : tr.snapshots) CHECK(linf(s.u - linear_propagate(u0, s.t, 1.0)) < 1e-10);
  CHECK(tr.snapshots[2].t == 0.35);

  const Trajectory empty = run(u0, config(g, {1.0, 0.0, 2}, 0.1, 0.5));
  CHECK(empty.snapshots.empty());
  CHECK(empty.diagnostics.series.size() == 6);
}

TEST_CASE("invariants of the nonlinear flow") {
  const Grid g(16, 16, 96, 96);
  const Field u0 = Field::from_function(g, [](double x, double y) {
    return 0.5 * std::exp(-(x * x + y * y)) + 0.3 * std::exp(-((x - 2) * (x - 2) + (y + 1) * (y + 1)) / 2);
  });
  std::vector<double> snaps;
  for (int n = 0; n <= 10; ++n) snaps.push_back(0.2 * n);
  const Trajectory tr = run(u0, config(g, {1.0, 1.0, 2}, 0.01, 2.0, snaps));
  const auto& s = tr.diagnostics.series;
  for (std::size_t n = 1; n < s.size(); ++n) CHECK(s[n].l2 <= s[n - 1].l2 * (1 + 1e-14));

  auto line_means = [&](const Field& f) {
    std::vector<double> m(std::size_t(g.Ny()), 0.0);
    for (int i = 0; i < g.Nx(); ++i)
      for (int j = 0; j < g.Ny(); ++j) m[std::size_t(j)] += f(i, j) * g.dx();
    return m;
  };
  const auto m0 = line_means(u0);
  double drift = 0.0;
  for (const auto& sn : tr.snapshots) {
    const auto m = line_means(sn.u);
    for (std::size_t j = 0; j < m.size(); ++j) drift = std::max(drift, std::abs(m[j] - m0[j]));
  }
  CHECK(drift < 1e-10);

  const auto H0 = tr.diagnostics.H(0);
  double early = 0.0, all = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (s[n].t <= 1.0) early = std::max(early, H0[n]);
    all = std::max(all, H0[n]);
  }
  CHECK(all <= 1.5 * early);
  const double ratio = tr.diagnostics.h21_energy_ratio(1.0);
  MESSAGE("H^{2,1} energy ratio " << ratio);
  CHECK(ratio <= 10.0);
  CHECK(ratio >= 1.0 - 1e-12);
}

TEST_CASE("runs are deterministic") {
  const Grid g(16, 16, 64, 64);
  const SimConfig c = config(g, {1.0, 1.0, 2}, 0.02, 0.4, {0.4});
  const Trajectory a = run(gaussian(g, 0.5), c), b = run(gaussian(g, 0.5), c);
  CHECK(a.snapshots[0].u.values() == b.snapshots[0].u.values());
}

TEST_CASE("energy identity") {
  const Grid g(16, 16, 96, 96);
  SUBCASE("zero data") {
    const Trajectory tr = run(Field(g), config(g, {1.0, 1.0, 2}, 0.1, 1.0));
    for (double r : dissipation_residual(tr)) CHECK(r == 0.0);
  }
  SUBCASE("linear: the residual is the trapezoid error in time") {
    // For a e^{-r^2} the cumulative trapezoid error of 2 int |u_x|^2 is (dt^2/12) * 4 * (3 - 3 s^5) |u0|^2,
    // s^2 = 1/(1 + 4T), from |u_xx(t)|^2 / |u0|^2 = 3 (1 + 4t)^{-5/2}.
    auto worst_at = [&](double dt) {
      const Trajectory tr = run(gaussian(g, 0.5), config(g, {1.0, 0.0, 2}, dt, 10.0));
      double worst = 0.0;
      for (double r : dissipation_residual(tr)) worst = std::max(worst, std::abs(r));
      return worst;
    };
    const double coarse = worst_at(1e-2);
    const double predicted = 1e-4 / 12 * 4 * 3 * (1 - std::pow(41.0, -2.5));
    MESSAGE("linear residual at dt = 1e-2: " << coarse << " predicted " << predicted);
    CHECK(coarse == doctest::Approx(predicted).epsilon(0.02));
    const double fine = worst_at(5e-4);
    MESSAGE("linear residual at dt = 5e-4: " << fine);
    CHECK(fine < 1e-6);
  }
  SUBCASE("nonlinear p = 2") {
    const Trajectory tr = run(gaussian(g, 0.5), config(g, {1.0, 1.0, 2}, 5e-3, 10.0));
    double worst = 0.0;
    for (double r : dissipation_residual(tr)) worst = std::max(worst, r);
    CHECK(worst < 1e-4);
    CHECK(tr.diagnostics.series.back().dissipation_residual == doctest::Approx(dissipation_residual(tr).back()));
  }
}

TEST_CASE("Duhamel consistency") {
  const Grid g(16, 16, 96, 96);
  std::vector<double> snaps;
  for (int n = 0; n <= 64; ++n) snaps.push_back(2.0 * n / 64);
  SUBCASE("linear") {
    const Equation eq{1.0, 0.0, 2};
    const Trajectory tr = run(gaussian(g, 0.5), config(g, eq, 0.01, 2.0, snaps));
    CHECK(duhamel_residual(tr, eq) < 1e-10);
    CHECK(duhamel_residual(tr, eq, DuhamelRule::simpson) < 1e-10);
  }
  SUBCASE("nonlinear and the sign of beta") {
    const Equation eq{1.0, 1.0, 2};
    const Field u0 = gaussian(g, 0.5);
    const Trajectory tr = run(u0, config(g, eq, 0.01, 2.0, snaps));
    CHECK(duhamel_residual(tr, eq) < 1e-4);
    // With the wrong sign the correction enters twice.
    const Equation neg{1.0, -1.0, 2};
    double gap = 0.0;
    for (std::size_t n = 2; n < tr.snapshots.size(); n += 2)
      gap = std::max(gap, l2(tr.snapshots[n].u - linear_propagate(u0, tr.snapshots[n].t, 1.0)));
    CHECK(duhamel_residual(tr, neg) == doctest::Approx(2 * gap / l2(u0)).epsilon(0.02));
  }
  SUBCASE("too few snapshots") {
    const Equation eq{1.0, 1.0, 2};
    const Trajectory tr = run(gaussian(g, 0.5), config(g, eq, 0.01, 1.0, {0.0, 0.5, 1.0}));
    CHECK_THROWS_WITH_AS(duhamel_residual(tr, eq), doctest::Contains("at least 33"), Error);
  }
}

TEST_CASE("fourth order in dt") {
  const Grid g(16, 16, 64, 64);
  const Field u0 = gaussian(g, 0.5);
  const Equation eq{1.0, 1.0, 2};
  std::vector<Field> sols;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) sols.push_back(run(u0, config(g, eq, dt, 1.0, {1.0})).snapshots[0].u);
  const double e1 = l2(sols[0] - sols[1]), e2 = l2(sols[1] - sols[2]), e3 = l2(sols[2] - sols[3]);
  const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
  MESSAGE("observed orders " << o1 << " " << o2);
  CHECK(o1 > 3.5);
  CHECK(o1 < 4.5);
  CHECK(o2 > 3.5);
  CHECK(o2 < 4.5);
}
