#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "udsift/errors.hpp"

namespace udsift {

/// Complex baseband radar return, uniformly sampled.
struct TimeSeries {
  std::vector<std::complex<double>> samples;
  double sample_rate_hz = 0.0;
};

inline void validate(const TimeSeries& ts, const char* who) {
  if (ts.sample_rate_hz <= 0.0)
    throw ParameterError(std::string(who) + ": sample_rate_hz must be positive");
  if (ts.samples.empty()) throw ParameterError(std::string(who) + ": empty time series");
}

enum class WindowKind { Hanning };

struct StftParams {
  int window_len = 512;
  int overlap_len = 256;
  int nfft = 1024;
  WindowKind window_kind = WindowKind::Hanning;
};

inline void validate(const StftParams& p) {
  if (p.window_len <= 0) throw ParameterError("stft: window_len must be positive");
  if (p.overlap_len < 0) throw ParameterError("stft: overlap_len must be non-negative");
  if (p.window_len <= p.overlap_len)
    throw ParameterError("stft: window_len must be greater than overlap_len");
  if (p.nfft < p.window_len) throw ParameterError("stft: nfft must be >= window_len");
}

/// Whether spectrogram cells hold linear power (|STFT|^2) or the normalized
/// [0,1] grayscale produced by to_grayscale_image. Tracking this makes the
/// grayscale mapping idempotent and lets consumers reject unprocessed input.
enum class ValueScale : std::uint8_t { LinearPower = 0, GrayscaleNorm = 1 };

/// Time x Doppler magnitude image. Rows run from -fs/2 to +fs/2 (DC-centered),
/// columns are STFT frames.
struct Spectrogram {
  Eigen::MatrixXd values;            // rows = Doppler bins, cols = time frames
  std::vector<double> freq_axis_hz;  // per-row center frequency, strictly increasing
  std::vector<double> time_axis_s;   // per-column center time, strictly increasing
  ValueScale scale = ValueScale::LinearPower;
  bool axes_present = true;  // false when loaded from axis-free formats (PNG)

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

inline void validate(const Spectrogram& s, const char* who) {
  if (s.values.size() == 0) throw ParameterError(std::string(who) + ": empty spectrogram");
  if (static_cast<Eigen::Index>(s.freq_axis_hz.size()) != s.values.rows() ||
      static_cast<Eigen::Index>(s.time_axis_s.size()) != s.values.cols())
    throw ParameterError(std::string(who) + ": axis length mismatch");
  if ((s.values.array() < 0.0).any())
    throw ParameterError(std::string(who) + ": negative spectrogram value");
  for (std::size_t i = 1; i < s.freq_axis_hz.size(); ++i)
    if (s.freq_axis_hz[i] <= s.freq_axis_hz[i - 1])
      throw ParameterError(std::string(who) + ": freq axis not strictly increasing");
  for (std::size_t i = 1; i < s.time_axis_s.size(); ++i)
    if (s.time_axis_s[i] <= s.time_axis_s[i - 1])
      throw ParameterError(std::string(who) + ": time axis not strictly increasing");
}

}  // namespace udsift
