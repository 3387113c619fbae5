#pragma once

#include <bit>
#include <complex>
#include <vector>

#include "vortexgas/common.hpp"

namespace vortexgas::detail {

using cplx = std::complex<double>;

/// In-place iterative radix-2 FFT, n a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  // bit reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= inv;
  }
}

/// O(n^2) DFT for arbitrary n; used only for small non-power-of-two grids.
inline void dft_naive(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  const double sign = inverse ? 2.0 : -2.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * pi * static_cast<double>(k * j % n) / static_cast<double>(n);
      out[k] += a[j] * cplx(std::cos(ang), std::sin(ang));
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= inv;
  }
  a = std::move(out);
}

inline void fft(std::vector<cplx>& a, bool inverse) {
  if (std::has_single_bit(a.size()))
    fft_pow2(a, inverse);
  else
    dft_naive(a, inverse);
}

/// 2D transform of a row-major nx * ny array (rows first, then columns).
inline void fft_2d(std::vector<cplx>& a, std::size_t nx, std::size_t ny, bool inverse) {
  require(a.size() == nx * ny, errc::validation, "fft_2d size mismatch");
  std::vector<cplx> line;
  line.resize(nx);
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) line[x] = a[y * nx + x];
    fft(line, inverse);
    for (std::size_t x = 0; x < nx; ++x) a[y * nx + x] = line[x];
  }
  line.assign(ny, cplx());
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) line[y] = a[y * nx + x];
    fft(line, inverse);
    for (std::size_t y = 0; y < ny; ++y) a[y * nx + x] = line[y];
  }
}

}  // namespace vortexgas::detail
