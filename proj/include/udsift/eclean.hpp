#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "udsift/types.hpp"

namespace udsift {

struct EcleanParams {
  double plateau_count_threshold = 0.1;  // on counts normalized by the max count
  int hist_bins = 64;
  double psf_fraction = 1.0;  // fraction of the point spread removed per peak
  int downsample_factor = 2;  // decimation of the global histogram
};

inline void validate(const EcleanParams& p) {
  if (!(p.plateau_count_threshold > 0.0))
    throw ParameterError("eclean: plateau_count_threshold must be positive");
  if (p.hist_bins < 8) throw ParameterError("eclean: hist_bins must be at least 8");
  if (!(p.psf_fraction > 0.0 && p.psf_fraction <= 1.0))
    throw ParameterError("eclean: psf_fraction must lie in (0, 1]");
  if (p.downsample_factor < 1) throw ParameterError("eclean: downsample_factor must be >= 1");
}

namespace detail {

/// Global intensity cutoff: decimate, histogram, normalize counts by the max
/// count, then walk down from the brightest bin while counts stay below the
/// plateau threshold. The cutoff is the lower edge of the last such bin.
/// Returns a negative value for a degenerate single-intensity histogram.
inline double eclean_alpha(const Eigen::MatrixXd& img, const EcleanParams& p) {
  std::vector<double> counts(static_cast<std::size_t>(p.hist_bins), 0.0);
  const double bin_w = 1.0 / static_cast<double>(p.hist_bins);
  int nonzero_bins = 0;
  for (Eigen::Index r = 0; r < img.rows(); r += p.downsample_factor)
    for (Eigen::Index c = 0; c < img.cols(); c += p.downsample_factor) {
      int b = static_cast<int>(img(r, c) / bin_w);
      b = std::clamp(b, 0, p.hist_bins - 1);
      if (counts[static_cast<std::size_t>(b)] == 0.0) ++nonzero_bins;
      counts[static_cast<std::size_t>(b)] += 1.0;
    }
  if (nonzero_bins <= 1) return -1.0;
  const double max_count = *std::max_element(counts.begin(), counts.end());
  int cutoff_bin = p.hist_bins;  // one past the top if even the top bin is populated
  for (int b = p.hist_bins - 1; b >= 0; --b) {
    if (counts[static_cast<std::size_t>(b)] / max_count >= p.plateau_count_threshold) break;
    cutoff_bin = b;
  }
  return static_cast<double>(cutoff_bin) * bin_w;
}

}  // namespace detail

/// Histogram-driven iterative peak extraction (per time column). Keeps the
/// N_s largest peaks of each column, where N_s counts pixels at or above the
/// global intensity cutoff; everything else is zeroed. The point spread is a
/// 3x1 triangular kernel along the frequency axis.
inline Spectrogram eclean(const Spectrogram& s, const EcleanParams& p = {}) {
  validate(s, "eclean");
  validate(p);
  if (s.values.maxCoeff() > 1.0 + 1e-9)
    throw ParameterError("eclean: input must be normalized to [0,1]");

  Spectrogram out = s;
  const double alpha = detail::eclean_alpha(s.values, p);
  if (alpha < 0.0) return out;  // single-intensity image passes through

  const Eigen::Index rows = s.rows(), cols = s.cols();
  out.values.setZero(rows, cols);
  std::vector<double> work(static_cast<std::size_t>(rows));
  for (Eigen::Index c = 0; c < cols; ++c) {
    Eigen::Index n_extract = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      work[static_cast<std::size_t>(r)] = s.values(r, c);
      if (s.values(r, c) >= alpha) ++n_extract;
    }
    for (Eigen::Index j = 0; j < n_extract; ++j) {
      Eigen::Index peak = 0;
      double peak_val = work[0];
      for (Eigen::Index r = 1; r < rows; ++r)
        if (work[static_cast<std::size_t>(r)] > peak_val) {
          peak_val = work[static_cast<std::size_t>(r)];
          peak = r;
        }
      if (peak_val <= 0.0) break;
      out.values(peak, c) = std::max(out.values(peak, c), peak_val);
      // subtract a fraction of the point spread centered at the peak
      work[static_cast<std::size_t>(peak)] -= p.psf_fraction * peak_val;
      if (peak > 0) work[static_cast<std::size_t>(peak - 1)] -= 0.5 * p.psf_fraction * peak_val;
      if (peak + 1 < rows)
        work[static_cast<std::size_t>(peak + 1)] -= 0.5 * p.psf_fraction * peak_val;
    }
  }
  return out;
}

}  // namespace udsift
