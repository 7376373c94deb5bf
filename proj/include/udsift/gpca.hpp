#pragma once

#include <Eigen/Dense>
#include <vector>

#include "udsift/errors.hpp"

namespace udsift {

/// Two-sided (bilinear) PCA model: orthonormal row/column subspaces plus the
/// training mean image. Hull members are filled in by build_hull.
struct GpcaModel {
  std::string class_label;
  Eigen::MatrixXd u1;          // I1 x P1
  Eigen::MatrixXd u2;          // I2 x P2
  Eigen::MatrixXd mean_image;  // I1 x I2
  bool center = true;          // subtract mean_image before projecting
  std::vector<double> objective_history;  // scatter per alternating iteration

  std::vector<Eigen::VectorXd> hull_points;
  Eigen::VectorXd hull_centroid;
  bool hull_degenerate = false;

  int p1() const { return static_cast<int>(u1.cols()); }
  int p2() const { return static_cast<int>(u2.cols()); }
  int feature_dim() const { return p1() * p2(); }
};

namespace detail {

/// Top-p eigenvectors (descending eigenvalue) of a symmetric matrix, with a
/// sign convention so results are stable across equivalent runs.
inline Eigen::MatrixXd top_eigenvectors(const Eigen::MatrixXd& sym, int p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const Eigen::Index n = sym.rows();
  Eigen::MatrixXd out(n, p);
  for (int j = 0; j < p; ++j) {
    Eigen::VectorXd v = es.eigenvectors().col(n - 1 - j);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    out.col(j) = v;
  }
  return out;
}

}  // namespace detail

/// Fit the subspace pair maximizing the projected scatter
/// sum_m ||U1^T (S_m - mean) U2||_F^2 by alternating eigendecompositions.
/// The objective is non-decreasing across iterations; iteration stops when
/// its relative change drops below 1e-9 (cap 100).
inline GpcaModel fit_gpca(const std::vector<Eigen::MatrixXd>& samples, int p1, int p2) {
  if (samples.size() < 2) throw ParameterError("fit_gpca: need at least 2 samples");
  const Eigen::Index i1 = samples[0].rows(), i2 = samples[0].cols();
  for (const auto& s : samples)
    if (s.rows() != i1 || s.cols() != i2) throw ParameterError("fit_gpca: sample shape mismatch");
  if (p1 < 1 || p1 > i1 || p2 < 1 || p2 > i2)
    throw ParameterError("fit_gpca: subspace sizes out of range");

  GpcaModel model;
  model.mean_image = Eigen::MatrixXd::Zero(i1, i2);
  for (const auto& s : samples) model.mean_image += s;
  model.mean_image /= static_cast<double>(samples.size());

  std::vector<Eigen::MatrixXd> centered;
  centered.reserve(samples.size());
  double total_scatter = 0.0;
  for (const auto& s : samples) {
    centered.push_back(s - model.mean_image);
    total_scatter += centered.back().squaredNorm();
  }

  if (total_scatter <= 0.0) {
    // All samples identical: fall back to the mean image's own covariance.
    model.u1 = detail::top_eigenvectors(model.mean_image * model.mean_image.transpose(), p1);
    model.u2 = detail::top_eigenvectors(model.mean_image.transpose() * model.mean_image, p2);
    model.objective_history = {0.0};
    return model;
  }

  // Initialize U2 from the mode-2 scatter with U1 treated as identity.
  {
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(i2, i2);
    for (const auto& a : centered) m2.noalias() += a.transpose() * a;
    model.u2 = detail::top_eigenvectors(m2, p2);
  }

  double prev_obj = -1.0;
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(i1, i1);
    for (const auto& a : centered) {
      const Eigen::MatrixXd b = a * model.u2;
      m1.noalias() += b * b.transpose();
    }
    model.u1 = detail::top_eigenvectors(m1, p1);

    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(i2, i2);
    for (const auto& a : centered) {
      const Eigen::MatrixXd c = model.u1.transpose() * a;
      m2.noalias() += c.transpose() * c;
    }
    model.u2 = detail::top_eigenvectors(m2, p2);

    double obj = 0.0;
    for (const auto& a : centered)
      obj += (model.u1.transpose() * a * model.u2).squaredNorm();
    model.objective_history.push_back(obj);
    if (prev_obj >= 0.0 && obj - prev_obj <= 1e-9 * std::max(obj, 1e-300)) break;
    prev_obj = obj;
  }
  return model;
}

/// Core-matrix feature: vec(U1^T (S - mean) U2), column-major, length P1*P2.
/// With model.center == false the image is projected without mean removal.
inline Eigen::VectorXd project_features(const GpcaModel& model, const Eigen::MatrixXd& image) {
  if (image.rows() != model.mean_image.rows() || image.cols() != model.mean_image.cols())
    throw ParameterError("project_features: image shape does not match model");
  const Eigen::MatrixXd centered = model.center ? (image - model.mean_image).eval() : image;
  const Eigen::MatrixXd core = model.u1.transpose() * centered * model.u2;
  return Eigen::Map<const Eigen::VectorXd>(core.data(), core.size());
}

}  // namespace udsift
