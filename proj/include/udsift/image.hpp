#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "udsift/errors.hpp"

namespace udsift {

namespace detail {

inline double clampd(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

/// Catmull-Rom cubic kernel (a = -0.5), the usual bicubic choice.
inline double cubic_kernel(double x) {
  const double a = -0.5;
  x = std::fabs(x);
  if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

}  // namespace detail

/// Bilinear resize with pixel-center alignment. Same-size input is returned
/// unchanged so repeated application is exact.
inline Eigen::MatrixXd resize_bilinear(const Eigen::MatrixXd& in, Eigen::Index out_rows,
                                       Eigen::Index out_cols) {
  if (out_rows < 1 || out_cols < 1) throw ParameterError("resize_bilinear: bad target size");
  if (in.rows() == out_rows && in.cols() == out_cols) return in;
  const Eigen::Index ir = in.rows(), ic = in.cols();
  Eigen::MatrixXd out(out_rows, out_cols);
  const double sr = static_cast<double>(ir) / static_cast<double>(out_rows);
  const double sc = static_cast<double>(ic) / static_cast<double>(out_cols);
  for (Eigen::Index r = 0; r < out_rows; ++r) {
    const double y = detail::clampd((static_cast<double>(r) + 0.5) * sr - 0.5, 0.0,
                                    static_cast<double>(ir - 1));
    const Eigen::Index y0 = static_cast<Eigen::Index>(std::floor(y));
    const Eigen::Index y1 = std::min(y0 + 1, ir - 1);
    const double fy = y - static_cast<double>(y0);
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      const double x = detail::clampd((static_cast<double>(c) + 0.5) * sc - 0.5, 0.0,
                                      static_cast<double>(ic - 1));
      const Eigen::Index x0 = static_cast<Eigen::Index>(std::floor(x));
      const Eigen::Index x1 = std::min(x0 + 1, ic - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = in(y0, x0) * (1.0 - fx) + in(y0, x1) * fx;
      const double bot = in(y1, x0) * (1.0 - fx) + in(y1, x1) * fx;
      out(r, c) = top * (1.0 - fy) + bot * fy;
    }
  }
  return out;
}

/// Bicubic (Catmull-Rom) resize, used to upsample small images before
/// multi-scale similarity scoring.
inline Eigen::MatrixXd resize_bicubic(const Eigen::MatrixXd& in, Eigen::Index out_rows,
                                      Eigen::Index out_cols) {
  if (out_rows < 1 || out_cols < 1) throw ParameterError("resize_bicubic: bad target size");
  if (in.rows() == out_rows && in.cols() == out_cols) return in;
  const Eigen::Index ir = in.rows(), ic = in.cols();
  Eigen::MatrixXd out(out_rows, out_cols);
  const double sr = static_cast<double>(ir) / static_cast<double>(out_rows);
  const double sc = static_cast<double>(ic) / static_cast<double>(out_cols);
  auto at = [&](Eigen::Index r, Eigen::Index c) {
    r = std::clamp<Eigen::Index>(r, 0, ir - 1);
    c = std::clamp<Eigen::Index>(c, 0, ic - 1);
    return in(r, c);
  };
  for (Eigen::Index r = 0; r < out_rows; ++r) {
    const double y = (static_cast<double>(r) + 0.5) * sr - 0.5;
    const Eigen::Index y0 = static_cast<Eigen::Index>(std::floor(y));
    const double fy = y - static_cast<double>(y0);
    double wy[4];
    for (int i = 0; i < 4; ++i) wy[i] = detail::cubic_kernel(fy - static_cast<double>(i - 1));
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      const double x = (static_cast<double>(c) + 0.5) * sc - 0.5;
      const Eigen::Index x0 = static_cast<Eigen::Index>(std::floor(x));
      const double fx = x - static_cast<double>(x0);
      double wx[4];
      for (int i = 0; i < 4; ++i) wx[i] = detail::cubic_kernel(fx - static_cast<double>(i - 1));
      double acc = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          acc += wy[i] * wx[j] * at(y0 + i - 1, x0 + j - 1);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace udsift
