#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "udsift/errors.hpp"

namespace udsift {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 Cooley-Tukey. n must be a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

}  // namespace detail

/// Unnormalized forward DFT of arbitrary length: X[k] = sum x[m] e^{-j2πkm/n}.
/// Power-of-two sizes run radix-2 directly; other sizes go through Bluestein's
/// chirp-z transform so large prime nfft values stay O(n log n).
inline std::vector<cplx> dft_forward(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  if (n == 0) throw ParameterError("dft_forward: empty input");
  if (n == 1) return x;
  if (detail::is_pow2(n)) {
    std::vector<cplx> a = x;
    detail::fft_pow2(a, false);
    return a;
  }
  // Bluestein: X[k] = conj(b[k]) * IFFT(FFT(a.*b_pad) .* FFT(c))[k]
  // with chirp w[m] = e^{-jπ m^2 / n}.
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  std::vector<cplx> chirp(n);
  for (std::size_t i = 0; i < n; ++i) {
    // i*i mod 2n keeps the phase argument small for big transforms.
    const std::size_t q = (i * i) % (2 * n);
    const double ang = -std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
    chirp[i] = cplx(std::cos(ang), std::sin(ang));
  }
  std::vector<cplx> a(m, cplx(0.0, 0.0));
  std::vector<cplx> b(m, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) a[i] = x[i] * chirp[i];
  b[0] = std::conj(chirp[0]);
  for (std::size_t i = 1; i < n; ++i) b[i] = b[m - i] = std::conj(chirp[i]);
  detail::fft_pow2(a, false);
  detail::fft_pow2(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  detail::fft_pow2(a, true);
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * chirp[i];
  return out;
}

}  // namespace udsift
