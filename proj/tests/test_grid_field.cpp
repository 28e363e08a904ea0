#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "zkb/error.hpp"
#include "zkb/field.hpp"

using namespace zkb;

namespace {

const double kPi = 3.14159265358979323846;

Field gaussian(const Grid& g) {
  return Field::from_function(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
}

double sup_diff(const Field& a, const std::function<double(double, double)>& f) {
  double s = 0.0;
  const Grid& g = a.grid();
  for (int i = 0; i < g.Nx(); ++i)
    for (int j = 0; j < g.Ny(); ++j) s = std::max(s, std::abs(a(i, j) - f(g.x(i), g.y(j))));
  return s;
}

Field random_smooth(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-g.Lx() / 2, g.Lx() / 2), w(0.7, 2.5), a(-1, 1);
  const double x0 = c(rng), y0 = c(rng), w0 = w(rng), a0 = a(rng);
  const double x1 = c(rng), y1 = c(rng), w1 = w(rng), a1 = a(rng);
  return Field::from_function(g, [=](double x, double y) {
    return a0 * std::exp(-((x - x0) * (x - x0) + (y - y0) * (y - y0)) / (w0 * w0)) +
           a1 * std::exp(-((x - x1) * (x - x1) + (y - y1) * (y - y1)) / (w1 * w1));
  });
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(kPi, kPi, 8, 8);
  CHECK(g.dx() == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(g.max_xi() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(g.xi(4) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(g.xi(5) == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(g.x(4) == doctest::Approx(0.0));
  CHECK(Grid(50, 50, 512, 512).dx() == doctest::Approx(100.0 / 512).epsilon(1e-15));
  CHECK_THROWS_AS(Grid(1, 1, 7, 8), Error);
  CHECK_THROWS_AS(Grid(1, 1, 6, 8), Error);
  CHECK_THROWS_AS(Grid(0, 1, 8, 8), Error);
  CHECK_THROWS_AS(Grid(1, -1, 8, 8), Error);
}

TEST_CASE("transform pair") {
  SUBCASE("zero field") {
    const Grid g(5, 5, 16, 16);
    const SpecField F = to_spectral(Field(g));
    for (const auto& c : F.coeffs()) CHECK(std::abs(c) == 0.0);
  }
  SUBCASE("pure cosine has two coefficients") {
    const Grid g(kPi, kPi, 16, 16);
    const SpecField F = to_spectral(Field::from_function(g, [](double x, double) { return std::cos(x); }));
    int nonzero = 0;
    for (int k = 0; k < g.Nx(); ++k)
      for (int m = 0; m < g.Nyh(); ++m)
        if (std::abs(F(k, m)) > 1e-12) {
          ++nonzero;
          CHECK(std::abs(g.xi(k)) == doctest::Approx(1.0));
          CHECK(m == 0);
        }
    CHECK(nonzero == 2);
  }
  SUBCASE("continuum normalization of the Gaussian") {
    // (1/2pi) \int\int e^{-x^2-y^2} e^{-i(x xi + y eta)} = e^{-(xi^2+eta^2)/4} / 2
    const Grid g(20, 20, 256, 256);
    const SpecField F = to_spectral(gaussian(g));
    double worst = 0.0;
    for (int k = 0; k < g.Nx(); k += 7)
      for (int m = 0; m < g.Nyh(); m += 5) {
        const double xi = g.xi(k), eta = g.eta(m);
        worst = std::max(worst, std::abs(F(k, m) - cplx(0.5 * std::exp(-(xi * xi + eta * eta) / 4), 0.0)));
      }
    CHECK(worst < 1e-12);
  }
  SUBCASE("Parseval against a direct double sum") {
    const Grid g(20, 20, 256, 256);
    const Field f = gaussian(g);
    double direct = 0.0;
    for (double v : f.values()) direct += v * v;
    direct *= g.dx() * g.dy();
    const SpecField F = to_spectral(f);
    double spec = 0.0;
    for (int k = 0; k < g.Nx(); ++k)
      for (int m = 0; m < g.Nyh(); ++m) {
        const double w = (m == 0 || m == g.Ny() / 2) ? 1.0 : 2.0;
        spec += w * std::norm(F(k, m));
      }
    spec *= g.dxi() * g.deta();
    CHECK(std::abs(direct - spec) / direct < 1e-10);
  }
  SUBCASE("round trip and Hermitian completion") {
    std::mt19937_64 rng(3);
    const Grid g(10, 7, 64, 48);
    const Field f = random_smooth(g, rng);
    const Field back = to_physical(to_spectral(f));
    CHECK(linf(back - f) <= 1e-12 * linf(f));
    const SpecField F = to_spectral(f);
    for (int k = 1; k < g.Nx(); k += 5)
      for (int m = 1; m < g.Ny() / 2; m += 3)
        CHECK(std::abs(F.full(g.Nx() - k, g.Ny() - m) - std::conj(F(k, m))) <= 1e-12 * linf(f));
  }
}

TEST_CASE("spectral derivatives") {
  const Grid gp(kPi, kPi, 32, 32);
  const Field s = Field::from_function(gp, [](double x, double) { return std::sin(x); });
  CHECK(sup_diff(spectral_derivative(s, Axis::x, 1), [](double x, double) { return std::cos(x); }) < 1e-10);
  CHECK(linf(spectral_derivative(s, Axis::y, 1)) < 1e-12);

  const Grid g(20, 20, 256, 256);
  const Field f = gaussian(g);
  const double err = sup_diff(spectral_derivative(f, Axis::x, 2),
                              [](double x, double y) { return (4 * x * x - 2) * std::exp(-(x * x + y * y)); });
  CHECK(err < 1e-8);
  const Field a = spectral_derivative(spectral_derivative(f, Axis::x, 1), Axis::y, 1);
  const Field b = spectral_derivative(spectral_derivative(f, Axis::y, 1), Axis::x, 1);
  CHECK(linf(a - b) < 1e-13);
  CHECK(linf(spectral_derivative(f, 1, 1) - a) < 1e-13);
}

TEST_CASE("fractional x-derivative") {
  const Grid gp(kPi, kPi, 32, 32);
  const Field s = Field::from_function(gp, [](double x, double) { return std::sin(x); });
  CHECK(linf(fractional_dx(s, 0.0) - s) == 0.0);
  CHECK(linf(fractional_dx(s, 2.0) - s) < 1e-12);

  const Grid g(20, 20, 256, 256);
  const Field dxg = spectral_derivative(gaussian(g), Axis::x, 1);
  const Field back = fractional_dx(fractional_dx(dxg, -0.6, ZeroModePolicy::strict), 0.6);
  CHECK(linf(back - dxg) < 1e-8);
  CHECK_THROWS_WITH_AS(fractional_dx(gaussian(g), -0.6, ZeroModePolicy::strict),
                       doctest::Contains("nonintegrable zero mode"), Error);
  CHECK_NOTHROW(fractional_dx(gaussian(g), -0.6, ZeroModePolicy::zero_out));
}

TEST_CASE("norms of the unit Gaussian") {
  const Grid g(20, 20, 256, 256);
  const Field f = gaussian(g);
  CHECK(l2(f) == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-12));
  CHECK(l2(spectral_derivative(f, Axis::x, 1)) == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-12));
  CHECK(norm(f, NormKind::Lq(4)) == doctest::Approx(std::pow(kPi / 4, 0.25)).epsilon(1e-12));
  CHECK(l1(f) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(integral(f) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(linf(f) == doctest::Approx(1.0));
  // ||f||_{H^1}^2 = ||f||^2 + ||grad f||^2 = 3 pi / 2
  CHECK(norm(f, NormKind::Hs(1.0)) == doctest::Approx(std::sqrt(1.5 * kPi)).epsilon(1e-12));
  CHECK(norm(f, NormKind::Hs1s2(1.0, 0.0)) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  for (const NormKind& k : {NormKind::L2(), NormKind::Linf(), NormKind::Lq(3), NormKind::Hs(2), NormKind::Hs1s2(2, 1)})
    CHECK(norm(Field(g), k) == 0.0);
  CHECK_FALSE(norm_ex(f, NormKind::Hs(2)).unresolved);
}

TEST_CASE("unresolved Sobolev norm is flagged") {
  const Grid g(10, 10, 32, 32);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Field f(g);
  for (auto& v : f.values()) v = u(rng);
  CHECK(norm_ex(f, NormKind::Hs(2)).unresolved);
}

TEST_CASE("anisotropic norm is dominated by the isotropic one") {
  std::mt19937_64 rng(5);
  const Grid g(12, 12, 96, 96);
  for (int n = 0; n < 10; ++n) {
    const Field f = random_smooth(g, rng);
    for (auto [s1, s2] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {0.5, 1.5}})
      CHECK(norm(f, NormKind::Hs1s2(s1, s2)) <= norm(f, NormKind::Hs(s1 + s2)) * (1 + 1e-14));
  }
}

TEST_CASE("smoothing factor") {
  CHECK(smoothing_factor(1, 1, 1) == 1.0);
  CHECK(smoothing_factor(2, 1, 1) == 1.0);  // boundary t = a/(2 mu)
  CHECK(smoothing_factor(2, 1, 0.5) == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-14));
  // dense scan over xi in [0, 100]
  auto scan = [](double a, double mu, double t) {
    double best = 0.0;
    const int n = 2000000;
    int kb = 0;
    for (int k = 0; k <= n; ++k) {
      const double xi = 100.0 * k / n;
      const double v = std::pow(1 + xi * xi, a / 2) * std::exp(-mu * t * xi * xi);
      if (v > best) {
        best = v;
        kb = k;
      }
    }
    // parabolic refinement around the best sample
    double lo = 100.0 * std::max(0, kb - 1) / n, hi = 100.0 * (kb + 1) / n;
    for (int it = 0; it < 100; ++it) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      auto f = [&](double xi) { return std::pow(1 + xi * xi, a / 2) * std::exp(-mu * t * xi * xi); };
      if (f(m1) < f(m2)) lo = m1;
      else hi = m2;
    }
    const double xi = 0.5 * (lo + hi);
    return std::max(best, std::pow(1 + xi * xi, a / 2) * std::exp(-mu * t * xi * xi));
  };
  CHECK(std::abs(smoothing_factor(1, 1, 0.1) - scan(1, 1, 0.1)) / scan(1, 1, 0.1) < 1e-10);
  CHECK(std::abs(smoothing_factor(3.3, 0.7, 0.2) - scan(3.3, 0.7, 0.2)) / scan(3.3, 0.7, 0.2) < 1e-10);
  for (double t : {0.01, 0.1, 0.5, 2.0}) CHECK(smoothing_factor(2.5, 1.3, t) <= 1 + std::pow(2.5 / (2 * 1.3 * t), 1.25));
  CHECK_THROWS_AS(smoothing_factor(0, 1, 1), Error);
  CHECK_THROWS_AS(smoothing_factor(1, 0, 1), Error);
  CHECK_THROWS_AS(smoothing_factor(1, 1, 0), Error);
}

TEST_CASE("boundary measures") {
  const Grid g(10, 10, 64, 64);
  CHECK(boundary_sup(gaussian(g)) < 1e-20);
  const Field edge = Field::from_function(g, [](double x, double y) { return std::exp(-((x - 9.5) * (x - 9.5) + y * y)); });
  CHECK(boundary_sup(edge) > 0.1);
  CHECK(boundary_energy_fraction(edge) > 0.01);
  CHECK(boundary_energy_fraction(Field(g)) == 0.0);
}

TEST_CASE("field dump round trip") {
  const Grid g(3.5, 2.0, 16, 8);
  std::mt19937_64 rng(1);
  const Field f = random_smooth(g, rng);
  const auto path = (std::filesystem::temp_directory_path() / "zkb_field_test.zkb").string();
  write_field(path, f);
  const Field r = read_field(path);
  CHECK(r.grid() == g);
  CHECK(linf(r - f) == 0.0);
  std::ifstream in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  CHECK(std::string(magic, 4) == "ZKB1");
  CHECK(std::filesystem::file_size(path) == 4 + 4 * 8 + 16 * 8 * 8);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_field(path), Error);

  std::ostringstream os;
  write_field_csv(os, f);
  CHECK(os.str().rfind("x,y,value\n", 0) == 0);
}
