#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace zkb {

using cplx = std::complex<double>;

namespace detail {
void* aligned_alloc_bytes(std::size_t n);
void aligned_free(void* p) noexcept;
}  // namespace detail

// Allocator handing out FFTW-aligned storage so cached plans can be
// executed on any buffer.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() noexcept = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    return static_cast<T*>(detail::aligned_alloc_bytes(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { detail::aligned_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using RVec = std::vector<double, FftwAllocator<double>>;
using CVec = std::vector<cplx, FftwAllocator<cplx>>;

namespace fft {

// Unnormalized transforms; all are thread-safe (plans are cached per shape
// behind a mutex, execution uses the new-array interface).
//
// 2D real <-> half-complex, row-major nx x ny, output nx x (ny/2+1).
void r2c_2d(int nx, int ny, const double* in, cplx* out);
// Does not modify `in`.
void c2r_2d(int nx, int ny, const cplx* in, double* out);
// 1D complex; sign = -1 forward, +1 backward.
void c2c_1d(int n, const cplx* in, cplx* out, int sign);

// Smallest even integer >= n whose only prime factors are 2, 3, 5, 7.
int good_size(int n);

}  // namespace fft
}  // namespace zkb
