#pragma once

#include <cstddef>
#include <vector>

namespace zkb {

// Periodic box [-Lx, Lx) x [-Ly, Ly) with Nx x Ny samples.
// Samples sit at x_i = -Lx + i*dx, so x = 0 is the sample i = Nx/2.
class Grid {
public:
  Grid(double Lx, double Ly, int Nx, int Ny);

  double Lx() const noexcept { return Lx_; }
  double Ly() const noexcept { return Ly_; }
  int Nx() const noexcept { return Nx_; }
  int Ny() const noexcept { return Ny_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  double dxi() const noexcept;
  double deta() const noexcept;
  std::size_t size() const noexcept { return std::size_t(Nx_) * std::size_t(Ny_); }
  // Length of the stored half spectrum in y (r2c layout).
  int Nyh() const noexcept { return Ny_ / 2 + 1; }
  std::size_t spec_size() const noexcept { return std::size_t(Nx_) * std::size_t(Nyh()); }

  double x(int i) const noexcept { return x_[std::size_t(i)]; }
  double y(int j) const noexcept { return y_[std::size_t(j)]; }
  // Angular wavenumbers in standard DFT order.
  double xi(int k) const noexcept { return xi_[std::size_t(k)]; }
  double eta(int m) const noexcept { return eta_[std::size_t(m)]; }
  const std::vector<double>& xs() const noexcept { return x_; }
  const std::vector<double>& ys() const noexcept { return y_; }
  const std::vector<double>& xis() const noexcept { return xi_; }
  const std::vector<double>& etas() const noexcept { return eta_; }
  double max_xi() const noexcept;
  double max_eta() const noexcept;

  std::size_t index(int i, int j) const noexcept { return std::size_t(i) * std::size_t(Ny_) + std::size_t(j); }

  bool operator==(const Grid& o) const noexcept {
    return Lx_ == o.Lx_ && Ly_ == o.Ly_ && Nx_ == o.Nx_ && Ny_ == o.Ny_;
  }
  bool operator!=(const Grid& o) const noexcept { return !(*this == o); }

private:
  double Lx_, Ly_;
  int Nx_, Ny_;
  double dx_, dy_;
  std::vector<double> x_, y_, xi_, eta_;
};

Grid make_grid(double Lx, double Ly, int Nx, int Ny);

}  // namespace zkb
