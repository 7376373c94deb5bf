#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "udsift/fft.hpp"
#include "udsift/image.hpp"
#include "udsift/types.hpp"

namespace udsift {

/// Periodic Hanning window h[m] = 0.5 (1 - cos(2πm/N)).
inline std::vector<double> hanning_periodic(int n) {
  if (n <= 0) throw ParameterError("hanning: window length must be positive");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m)
    w[static_cast<std::size_t>(m)] =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * m / static_cast<double>(n)));
  return w;
}

namespace detail {

inline double bessel_i0(double x) {
  // Series expansion; converges fast for the beta values used here.
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

/// Reduce target/source to p/q with p,q <= max_den; throws if no rational
/// within 1e-9 relative error exists at that size.
inline void rational_ratio(double ratio, int max_den, std::int64_t& p_out, std::int64_t& q_out) {
  if (!(ratio > 0.0)) throw ParameterError("resample: ratio must be positive");
  std::int64_t best_p = 0, best_q = 0;
  double best_err = 1e300;
  for (std::int64_t q = 1; q <= max_den; ++q) {
    const std::int64_t p = static_cast<std::int64_t>(std::llround(ratio * static_cast<double>(q)));
    if (p < 1 || p > max_den) continue;
    const double err = std::fabs(static_cast<double>(p) / static_cast<double>(q) - ratio);
    if (err < best_err) {
      best_err = err;
      best_p = p;
      best_q = q;
      if (err == 0.0) break;
    }
  }
  if (best_p == 0 || best_err > 1e-9 * ratio)
    throw ParameterError("resample: rate ratio not expressible as p/q with p,q <= 512");
  const std::int64_t g = std::gcd(best_p, best_q);
  p_out = best_p / g;
  q_out = best_q / g;
}

}  // namespace detail

/// Rational-rate resampler. Anti-alias low-pass is a Kaiser (beta=8)
/// windowed sinc spanning 63 input samples, cut off at the smaller of the
/// input/output Nyquist rates. Output length is floor(len * p / q).
inline TimeSeries resample(const TimeSeries& ts, double target_rate_hz) {
  validate(ts, "resample");
  if (!(target_rate_hz > 0.0)) throw ParameterError("resample: target rate must be positive");
  if (target_rate_hz == ts.sample_rate_hz) return ts;

  std::int64_t p = 0, q = 0;
  detail::rational_ratio(target_rate_hz / ts.sample_rate_hz, 512, p, q);

  const std::int64_t n_in = static_cast<std::int64_t>(ts.samples.size());
  const std::int64_t n_out = (n_in * p) / q;
  if (n_out < 1) throw ParameterError("resample: input too short for target rate");

  // Cutoff in cycles per input sample; 0.5 is the input Nyquist.
  const double ratio = static_cast<double>(p) / static_cast<double>(q);
  const double fc = 0.5 * std::min(1.0, ratio);
  const int half = 31;  // 63 taps total
  const double beta = 8.0;
  const double i0b = detail::bessel_i0(beta);

  TimeSeries out;
  out.sample_rate_hz = target_rate_hz;
  out.samples.resize(static_cast<std::size_t>(n_out));
  for (std::int64_t n = 0; n < n_out; ++n) {
    // Continuous-time position of output sample n, in input-sample units.
    const double tau = static_cast<double>(n) * static_cast<double>(q) / static_cast<double>(p);
    const std::int64_t m0 = static_cast<std::int64_t>(std::floor(tau)) - half + 1;
    std::complex<double> acc(0.0, 0.0);
    double wsum = 0.0;
    for (std::int64_t m = m0; m < m0 + 2 * half + 1; ++m) {
      const double u = tau - static_cast<double>(m);
      const double un = u / (half + 1.0);
      if (un <= -1.0 || un >= 1.0) continue;
      const double kaiser = detail::bessel_i0(beta * std::sqrt(1.0 - un * un)) / i0b;
      const double x = 2.0 * fc * u;
      const double sinc = (x == 0.0) ? 1.0
                                     : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
      const double w = 2.0 * fc * sinc * kaiser;
      wsum += w;
      if (m >= 0 && m < n_in) acc += ts.samples[static_cast<std::size_t>(m)] * w;
    }
    // Normalize to unit DC gain so constant inputs pass through exactly.
    out.samples[static_cast<std::size_t>(n)] = (wsum > 0.0) ? acc / wsum : acc;
  }
  return out;
}

/// Squared-magnitude STFT with a DC-centered two-sided frequency axis.
/// Frames start at multiples of hop = window_len - overlap_len; a trailing
/// partial frame is dropped.
inline Spectrogram stft_spectrogram(const TimeSeries& ts, const StftParams& p) {
  validate(ts, "stft");
  validate(p);
  const std::int64_t n = static_cast<std::int64_t>(ts.samples.size());
  if (n < p.window_len) throw ParameterError("stft: series shorter than one window");

  const int hop = p.window_len - p.overlap_len;
  const std::int64_t frames = (n - p.window_len) / hop + 1;
  const std::vector<double> win = hanning_periodic(p.window_len);

  const int nfft = p.nfft;
  const int dc_row = nfft / 2;  // row index of DC after the shift below

  Spectrogram s;
  s.values.setZero(nfft, frames);
  s.freq_axis_hz.resize(static_cast<std::size_t>(nfft));
  for (int k = 0; k < nfft; ++k)
    s.freq_axis_hz[static_cast<std::size_t>(k)] =
        (static_cast<double>(k - dc_row)) * ts.sample_rate_hz / static_cast<double>(nfft);
  s.time_axis_s.resize(static_cast<std::size_t>(frames));

  std::vector<cplx> frame(static_cast<std::size_t>(nfft));
  for (std::int64_t f = 0; f < frames; ++f) {
    const std::int64_t start = f * hop;
    s.time_axis_s[static_cast<std::size_t>(f)] =
        (static_cast<double>(start) + 0.5 * p.window_len) / ts.sample_rate_hz;
    std::fill(frame.begin(), frame.end(), cplx(0.0, 0.0));
    for (int m = 0; m < p.window_len; ++m)
      frame[static_cast<std::size_t>(m)] =
          ts.samples[static_cast<std::size_t>(start + m)] * win[static_cast<std::size_t>(m)];
    const std::vector<cplx> spec = dft_forward(frame);
    for (int k = 0; k < nfft; ++k) {
      // Row k shows DFT bin (k - dc_row) mod nfft: negative frequencies first.
      const int src = (k - dc_row + nfft) % nfft;
      s.values(k, f) = std::norm(spec[static_cast<std::size_t>(src)]);
    }
  }
  s.scale = ValueScale::LinearPower;
  s.axes_present = true;
  return s;
}

/// dB-map, clip to [peak - dyn_range_db, peak], scale to [0,1], resize.
/// Grayscale-scale input skips the dB map, so re-application only resizes;
/// at an unchanged size the operation is the identity.
inline Spectrogram to_grayscale_image(const Spectrogram& s, Eigen::Index out_rows,
                                      Eigen::Index out_cols, double dyn_range_db = 45.0) {
  validate(s, "to_grayscale_image");
  if (out_rows < 8 || out_cols < 8)
    throw ParameterError("to_grayscale_image: target size must be at least 8x8");
  if (!(dyn_range_db > 0.0)) throw ParameterError("to_grayscale_image: dyn_range_db must be positive");

  Eigen::MatrixXd mapped;
  const double peak = s.values.maxCoeff();
  if (peak <= 0.0) {
    mapped = Eigen::MatrixXd::Zero(s.values.rows(), s.values.cols());
  } else if (s.scale == ValueScale::GrayscaleNorm) {
    mapped = s.values;
  } else {
    const double peak_db = 10.0 * std::log10(peak);
    const double floor_db = peak_db - dyn_range_db;
    mapped.resize(s.values.rows(), s.values.cols());
    for (Eigen::Index r = 0; r < s.values.rows(); ++r)
      for (Eigen::Index c = 0; c < s.values.cols(); ++c) {
        const double v = s.values(r, c);
        const double db = (v > 0.0) ? 10.0 * std::log10(v) : floor_db;
        mapped(r, c) = (std::max(db, floor_db) - floor_db) / dyn_range_db;
      }
  }

  Spectrogram out;
  out.values = resize_bilinear(mapped, out_rows, out_cols);
  const double m = out.values.maxCoeff();
  if (m > 0.0 && m != 1.0) out.values /= m;  // resize can dilute the peak

  auto resample_axis = [](const std::vector<double>& axis, Eigen::Index n_out) {
    std::vector<double> out_axis(static_cast<std::size_t>(n_out));
    const std::size_t n_in = axis.size();
    if (n_in == static_cast<std::size_t>(n_out)) return axis;
    const double scale = static_cast<double>(n_in) / static_cast<double>(n_out);
    for (Eigen::Index i = 0; i < n_out; ++i) {
      const double pos = (static_cast<double>(i) + 0.5) * scale - 0.5;
      const double lo = axis.front(), hi = axis.back();
      const double step = (n_in > 1) ? (hi - lo) / static_cast<double>(n_in - 1) : 1.0;
      out_axis[static_cast<std::size_t>(i)] = lo + pos * step;
    }
    return out_axis;
  };
  out.freq_axis_hz = resample_axis(s.freq_axis_hz, out_rows);
  out.time_axis_s = resample_axis(s.time_axis_s, out_cols);
  out.scale = ValueScale::GrayscaleNorm;
  out.axes_present = s.axes_present;
  return out;
}

}  // namespace udsift
