#include "zkb/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace zkb {
namespace detail {

void* aligned_alloc_bytes(std::size_t n) {
  void* p = fftw_malloc(n == 0 ? 1 : n);
  if (!p) throw std::bad_alloc();
  return p;
}

void aligned_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace fft {
namespace {

enum class Kind { R2C2, C2R2, C2C1F, C2C1B };

struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<Kind, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& kv : plans) fftw_destroy_plan(kv.second);
  }

  fftw_plan get(Kind kind, int nx, int ny) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(kind, nx, ny);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    // Planning on scratch buffers; ESTIMATE never touches their contents
    // and keeps the chosen algorithm (hence the rounding) reproducible.
    const std::size_t nr = std::size_t(nx) * std::size_t(ny);
    const std::size_t nc = std::size_t(nx) * std::size_t(ny / 2 + 1);
    fftw_plan p = nullptr;
    const unsigned flags = FFTW_ESTIMATE;
    switch (kind) {
      case Kind::R2C2: {
        double* a = fftw_alloc_real(nr);
        fftw_complex* b = fftw_alloc_complex(nc);
        p = fftw_plan_dft_r2c_2d(nx, ny, a, b, flags);
        fftw_free(a);
        fftw_free(b);
        break;
      }
      case Kind::C2R2: {
        fftw_complex* a = fftw_alloc_complex(nc);
        double* b = fftw_alloc_real(nr);
        p = fftw_plan_dft_c2r_2d(nx, ny, a, b, flags);
        fftw_free(a);
        fftw_free(b);
        break;
      }
      case Kind::C2C1F:
      case Kind::C2C1B: {
        fftw_complex* a = fftw_alloc_complex(std::size_t(nx));
        fftw_complex* b = fftw_alloc_complex(std::size_t(nx));
        p = fftw_plan_dft_1d(nx, a, b, kind == Kind::C2C1F ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        fftw_free(a);
        fftw_free(b);
        break;
      }
    }
    if (!p) throw std::runtime_error("FFTW planning failed");
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

bool aligned(const void* p) { return fftw_alignment_of(reinterpret_cast<double*>(const_cast<void*>(p))) == 0; }

}  // namespace

void r2c_2d(int nx, int ny, const double* in, cplx* out) {
  fftw_plan p = cache().get(Kind::R2C2, nx, ny);
  if (aligned(in) && aligned(out)) {
    fftw_execute_dft_r2c(p, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
    return;
  }
  RVec a(in, in + std::size_t(nx) * ny);
  CVec b(std::size_t(nx) * (ny / 2 + 1));
  fftw_execute_dft_r2c(p, a.data(), reinterpret_cast<fftw_complex*>(b.data()));
  std::memcpy(out, b.data(), b.size() * sizeof(cplx));
}

void c2r_2d(int nx, int ny, const cplx* in, double* out) {
  fftw_plan p = cache().get(Kind::C2R2, nx, ny);
  // Multi-dimensional c2r overwrites its input, so always work on a copy.
  CVec a(in, in + std::size_t(nx) * (ny / 2 + 1));
  if (aligned(out)) {
    fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(a.data()), out);
    return;
  }
  RVec b(std::size_t(nx) * ny);
  fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(a.data()), b.data());
  std::memcpy(out, b.data(), b.size() * sizeof(double));
}

void c2c_1d(int n, const cplx* in, cplx* out, int sign) {
  fftw_plan p = cache().get(sign < 0 ? Kind::C2C1F : Kind::C2C1B, n, 1);
  if (aligned(in) && aligned(out) && in != out) {
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    return;
  }
  CVec a(in, in + n), b(static_cast<std::size_t>(n));
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(a.data()), reinterpret_cast<fftw_complex*>(b.data()));
  std::memcpy(out, b.data(), b.size() * sizeof(cplx));
}

int good_size(int n) {
  if (n < 2) n = 2;
  for (int m = n + (n % 2);; m += 2) {
    int r = m;
    for (int f : {2, 3, 5, 7})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

}  // namespace fft
}  // namespace zkb
