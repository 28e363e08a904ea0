#include "zkb/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zkb/error.hpp"

namespace zkb {

namespace {

void check_axis(const char* name, double L, int N) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw ConfigError(std::string("grid.L") + name, "half-width must be positive and finite");
  if (N < 8 || N % 2 != 0)
    throw ConfigError(std::string("grid.N") + name,
                      "sample count must be even and >= 8 (got " + std::to_string(N) + ")");
}

std::vector<double> wavenumbers(double L, int N) {
  std::vector<double> k(static_cast<std::size_t>(N));
  const double base = std::numbers::pi / L;
  for (int n = 0; n < N; ++n) k[std::size_t(n)] = base * (n <= N / 2 ? n : n - N);
  return k;
}

}  // namespace

Grid::Grid(double Lx, double Ly, int Nx, int Ny) : Lx_(Lx), Ly_(Ly), Nx_(Nx), Ny_(Ny) {
  check_axis("x", Lx, Nx);
  check_axis("y", Ly, Ny);
  dx_ = 2.0 * Lx / Nx;
  dy_ = 2.0 * Ly / Ny;
  x_.resize(std::size_t(Nx));
  y_.resize(std::size_t(Ny));
  for (int i = 0; i < Nx; ++i) x_[std::size_t(i)] = -Lx + i * dx_;
  for (int j = 0; j < Ny; ++j) y_[std::size_t(j)] = -Ly + j * dy_;
  xi_ = wavenumbers(Lx, Nx);
  eta_ = wavenumbers(Ly, Ny);
}

double Grid::dxi() const noexcept { return std::numbers::pi / Lx_; }
double Grid::deta() const noexcept { return std::numbers::pi / Ly_; }
double Grid::max_xi() const noexcept { return std::numbers::pi / dx_; }
double Grid::max_eta() const noexcept { return std::numbers::pi / dy_; }

Grid make_grid(double Lx, double Ly, int Nx, int Ny) { return Grid(Lx, Ly, Nx, Ny); }

}  // namespace zkb
