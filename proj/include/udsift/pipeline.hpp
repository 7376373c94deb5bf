#pragma once

#include "udsift/eclean.hpp"
#include "udsift/kinrules.hpp"
#include "udsift/signal.hpp"
#include "udsift/simulate.hpp"

namespace udsift {

/// Preprocessing chain settings: raw series -> resample -> STFT ->
/// grayscale -> eCLEAN. Defaults follow the reference operating point.
struct PipelineParams {
  double target_rate_hz = 1200.0;
  StftParams stft;
  // 30 dB keeps the display floor above the 15 dB-SNR noise floor, so the
  // cleaned images have dark backgrounds like the reference figures.
  double dyn_range_db = 30.0;
  Eigen::Index image_rows = 100;
  Eigen::Index image_cols = 100;
  bool apply_eclean = true;
  EcleanParams eclean_params;
  RuleThresholds rules;
};

/// Full chain from a raw series to a normalized, cleaned signature image.
inline Spectrogram preprocess_series(const TimeSeries& raw, const PipelineParams& p = {}) {
  const TimeSeries ts =
      (raw.sample_rate_hz == p.target_rate_hz) ? raw : resample(raw, p.target_rate_hz);
  const Spectrogram spec = stft_spectrogram(ts, p.stft);
  Spectrogram gray = to_grayscale_image(spec, p.image_rows, p.image_cols, p.dyn_range_db);
  if (p.apply_eclean) gray = eclean(gray, p.eclean_params);
  return gray;
}

/// Axes fallback for signatures loaded from axis-free files (PNG or SGRM
/// without axes): assume the reference acquisition geometry.
inline void apply_default_axes(Spectrogram& s, double fs_hz = 1200.0, double duration_s = 4.0) {
  if (s.axes_present) return;
  const Eigen::Index rows = s.rows(), cols = s.cols();
  for (Eigen::Index r = 0; r < rows; ++r)
    s.freq_axis_hz[static_cast<std::size_t>(r)] =
        fs_hz * (static_cast<double>(r) / static_cast<double>(rows) - 0.5);
  for (Eigen::Index c = 0; c < cols; ++c)
    s.time_axis_s[static_cast<std::size_t>(c)] =
        duration_s * (static_cast<double>(c) + 0.5) / static_cast<double>(cols);
  s.axes_present = true;
}

}  // namespace udsift
