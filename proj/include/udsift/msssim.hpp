#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "udsift/errors.hpp"
#include "udsift/image.hpp"
#include "udsift/manifest.hpp"
#include "udsift/parallel.hpp"
#include "udsift/png_gray.hpp"
#include "udsift/random.hpp"

namespace udsift {

struct MsssimParams {
  int scales = 5;
  // Standard five-scale weights; the same exponent applies to contrast and
  // structure at every scale and to luminance at the coarsest.
  std::vector<double> weights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  Eigen::Index min_side() const {
    return static_cast<Eigen::Index>((1 << (scales - 1)) * window);
  }
};

inline void validate(const MsssimParams& p) {
  if (p.scales < 1) throw ParameterError("ms_ssim: scales must be >= 1");
  if (static_cast<int>(p.weights.size()) != p.scales)
    throw ParameterError("ms_ssim: need one weight per scale");
  double sum = 0.0;
  for (double w : p.weights) sum += w;
  if (std::fabs(sum - 1.0) > 1e-6) throw ParameterError("ms_ssim: weights must sum to 1");
  if (p.window < 3 || p.window % 2 == 0) throw ParameterError("ms_ssim: window must be odd >= 3");
}

namespace detail {

inline Eigen::VectorXd gaussian_kernel(int n, double sigma) {
  Eigen::VectorXd k(n);
  const double mid = (n - 1) / 2.0;
  for (int i = 0; i < n; ++i) k(i) = std::exp(-0.5 * std::pow((i - mid) / sigma, 2.0));
  return k / k.sum();
}

/// Separable valid-mode Gaussian filtering: output shrinks by window-1.
inline Eigen::MatrixXd gauss_valid(const Eigen::MatrixXd& img, const Eigen::VectorXd& k) {
  const Eigen::Index n = k.size();
  const Eigen::Index rows = img.rows() - n + 1;
  const Eigen::Index cols = img.cols() - n + 1;
  Eigen::MatrixXd tmp(rows, img.cols());
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < img.cols(); ++c) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += k(i) * img(r + i, c);
      tmp(r, c) = acc;
    }
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += k(i) * tmp(r, c + i);
      out(r, c) = acc;
    }
  return out;
}

/// 2x2 block mean, dropping a trailing odd row/column.
inline Eigen::MatrixXd downsample2(const Eigen::MatrixXd& img) {
  const Eigen::Index rows = img.rows() / 2, cols = img.cols() / 2;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      out(r, c) = 0.25 * (img(2 * r, 2 * c) + img(2 * r + 1, 2 * c) + img(2 * r, 2 * c + 1) +
                          img(2 * r + 1, 2 * c + 1));
  return out;
}

}  // namespace detail

/// Multi-scale structural similarity of two [0,1] images of equal shape.
/// Contrast and structure are averaged per scale, luminance only at the
/// coarsest; negative structure means are clamped to zero so fractional
/// exponents stay real. Result lies in [0,1]; identical inputs give 1.
inline double ms_ssim(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      const MsssimParams& p = {}) {
  validate(p);
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ParameterError("ms_ssim: shape mismatch");
  if (std::min(x.rows(), x.cols()) < p.min_side())
    throw ParameterError("ms_ssim: image smaller than the multi-scale minimum (" +
                         std::to_string(p.min_side()) + ")");

  const double c1 = std::pow(p.k1 * p.dynamic_range, 2.0);
  const double c2 = std::pow(p.k2 * p.dynamic_range, 2.0);
  const double c3 = c2 / 2.0;
  const Eigen::VectorXd kernel = detail::gaussian_kernel(p.window, p.sigma);

  Eigen::MatrixXd xs = x, ys = y;
  double result = 1.0;
  for (int scale = 0; scale < p.scales; ++scale) {
    const Eigen::MatrixXd mu_x = detail::gauss_valid(xs, kernel);
    const Eigen::MatrixXd mu_y = detail::gauss_valid(ys, kernel);
    const Eigen::MatrixXd xx = detail::gauss_valid(xs.cwiseProduct(xs), kernel);
    const Eigen::MatrixXd yy = detail::gauss_valid(ys.cwiseProduct(ys), kernel);
    const Eigen::MatrixXd xy = detail::gauss_valid(xs.cwiseProduct(ys), kernel);

    double contrast_sum = 0.0, structure_sum = 0.0, luminance_sum = 0.0;
    const Eigen::Index n = mu_x.size();
    for (Eigen::Index i = 0; i < mu_x.rows(); ++i)
      for (Eigen::Index j = 0; j < mu_x.cols(); ++j) {
        const double mx = mu_x(i, j), my = mu_y(i, j);
        const double vx = std::max(0.0, xx(i, j) - mx * mx);
        const double vy = std::max(0.0, yy(i, j) - my * my);
        const double cov = xy(i, j) - mx * my;
        const double sx = std::sqrt(vx), sy = std::sqrt(vy);
        contrast_sum += (2.0 * sx * sy + c2) / (vx + vy + c2);
        structure_sum += (cov + c3) / (sx * sy + c3);
        luminance_sum += (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
      }
    const double contrast = contrast_sum / static_cast<double>(n);
    const double structure = std::max(0.0, structure_sum / static_cast<double>(n));
    const double w = p.weights[static_cast<std::size_t>(scale)];
    result *= std::pow(contrast, w) * std::pow(structure, w);
    if (scale == p.scales - 1) result *= std::pow(luminance_sum / static_cast<double>(n), w);
    if (scale + 1 < p.scales) {
      xs = detail::downsample2(xs);
      ys = detail::downsample2(ys);
    }
  }
  return std::clamp(result, 0.0, 1.0);
}

/// Images below the multi-scale minimum are upsampled (bicubic) to 176x176
/// before scoring, so 64x64 generator outputs remain scorable at 5 scales.
inline double ms_ssim_flexible(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                               const MsssimParams& p = {}) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ParameterError("ms_ssim: shape mismatch");
  const Eigen::Index target = p.min_side();
  if (std::min(x.rows(), x.cols()) >= target) return ms_ssim(x, y, p);
  auto clamp01 = [](Eigen::MatrixXd m) {
    return m.cwiseMax(0.0).cwiseMin(1.0);
  };
  return ms_ssim(clamp01(resize_bicubic(x, target, target)),
                 clamp01(resize_bicubic(y, target, target)), p);
}

struct ClassDiversity {
  std::string class_label;
  int n_pairs = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct DiversityReport {
  std::vector<ClassDiversity> classes;  // lexicographic class order
  std::vector<std::string> skipped;     // classes with fewer than 2 samples
};

namespace detail {

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace detail

/// Per-class MS-SSIM statistics over randomly drawn distinct unordered pairs.
/// Pairs are drawn by index after a stable sort by path, so the report is a
/// pure function of (manifest contents, n_pairs, seed).
inline DiversityReport diversity_report(const Manifest& manifest, int n_pairs = 100,
                                        std::uint64_t seed = 0, const MsssimParams& p = {}) {
  if (n_pairs < 1) throw ParameterError("diversity_report: n_pairs must be >= 1");
  DiversityReport report;
  auto classes = by_class(manifest);
  for (auto& [cls, recs] : classes) {
    if (recs.size() < 2) {
      report.skipped.push_back(cls);
      continue;
    }
    std::vector<const SignatureRecord*> sorted = recs;
    std::sort(sorted.begin(), sorted.end(),
              [](const SignatureRecord* a, const SignatureRecord* b) { return a->path < b->path; });

    const std::size_t n = sorted.size();
    const std::size_t max_pairs = n * (n - 1) / 2;
    const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(n_pairs), max_pairs);
    Rng rng(derive_seed(seed, std::hash<std::string>{}(cls)));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<char> used(max_pairs, 0);
    while (pairs.size() < want) {
      std::size_t i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
      std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      const std::size_t key = i * n + j - (i + 1) * (i + 2) / 2;
      if (used[key]) continue;
      used[key] = 1;
      pairs.emplace_back(i, j);
    }

    std::vector<double> scores(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
      const auto x = read_signature(manifest.resolve(*sorted[pairs[k].first]));
      const auto y = read_signature(manifest.resolve(*sorted[pairs[k].second]));
      scores[k] = ms_ssim_flexible(x.values, y.values, p);
    });

    std::sort(scores.begin(), scores.end());
    ClassDiversity d;
    d.class_label = cls;
    d.n_pairs = static_cast<int>(scores.size());
    for (double s : scores) d.mean += s;
    d.mean /= static_cast<double>(scores.size());
    d.median = detail::quantile_sorted(scores, 0.5);
    d.q1 = detail::quantile_sorted(scores, 0.25);
    d.q3 = detail::quantile_sorted(scores, 0.75);
    d.min = scores.front();
    d.max = scores.back();
    report.classes.push_back(d);
  }
  return report;
}

}  // namespace udsift
