#pragma once

// Independent reference implementations used to pin expected values.
// Everything here is deliberately written the slow, obvious way and must not
// share code with the library paths it checks.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Naive O(n^2) DFT: X[k] = sum_m x[m] e^{-j2πkm/n}.
inline std::vector<cplx> dft_naive(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(m) / static_cast<double>(n);
      acc += x[m] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

/// Direct per-frame spectrogram: windowed naive DFT per frame, |.|^2,
/// DC-centered rows. Mirrors the documented frame layout independently.
inline Eigen::MatrixXd spectrogram_naive(const std::vector<cplx>& samples, int window_len,
                                         int overlap_len, int nfft) {
  const int hop = window_len - overlap_len;
  const int frames = (static_cast<int>(samples.size()) - window_len) / hop + 1;
  std::vector<double> win(static_cast<std::size_t>(window_len));
  for (int m = 0; m < window_len; ++m)
    win[static_cast<std::size_t>(m)] =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * m / static_cast<double>(window_len)));
  Eigen::MatrixXd out(nfft, frames);
  const int dc = nfft / 2;
  for (int f = 0; f < frames; ++f) {
    std::vector<cplx> frame(static_cast<std::size_t>(nfft), cplx(0.0, 0.0));
    for (int m = 0; m < window_len; ++m)
      frame[static_cast<std::size_t>(m)] =
          samples[static_cast<std::size_t>(f * hop + m)] * win[static_cast<std::size_t>(m)];
    const auto spec = dft_naive(frame);
    for (int k = 0; k < nfft; ++k)
      out(k, f) = std::norm(spec[static_cast<std::size_t>((k - dc + nfft) % nfft)]);
  }
  return out;
}

/// Largest normalized autocorrelation local maximum of x over lags
/// [lag_lo, lag_hi]; returns -1 if no local maximum lies in the window.
inline double autocorr_peak(const std::vector<double>& x, int lag_lo, int lag_hi) {
  const int n = static_cast<int>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  std::vector<double> z(x.size());
  double denom = 0.0;
  for (int i = 0; i < n; ++i) {
    z[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - mean;
    denom += z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
  }
  if (denom <= 0.0) return -1.0;
  auto r = [&](int l) {
    double acc = 0.0;
    for (int t = 0; t + l < n; ++t)
      acc += z[static_cast<std::size_t>(t)] * z[static_cast<std::size_t>(t + l)];
    return acc / denom;
  };
  double best = -1.0;
  for (int l = std::max(1, lag_lo); l <= std::min(n - 2, lag_hi); ++l)
    if (r(l) >= r(l - 1) && r(l) >= r(l + 1)) best = std::max(best, r(l));
  return best;
}

}  // namespace oracle
