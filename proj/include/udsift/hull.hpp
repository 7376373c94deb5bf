#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "udsift/gpca.hpp"

namespace udsift {

namespace detail {

/// Phase-1 simplex with Bland's rule: is b in the cone/affine system
/// A λ = b, λ >= 0 feasible? A is m x n with m small. Rows are expected to
/// be pre-scaled to O(1) magnitudes by the caller.
inline bool lp_equality_feasible(const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in,
                                 double tol) {
  const Eigen::Index m = a_in.rows();
  const Eigen::Index n = a_in.cols();
  Eigen::MatrixXd a = a_in;
  Eigen::VectorXd b = b_in;
  for (Eigen::Index r = 0; r < m; ++r)
    if (b(r) < 0.0) {
      a.row(r) = -a.row(r);
      b(r) = -b(r);
    }

  // Tableau over structural + artificial variables; minimize sum of artificials.
  const Eigen::Index cols = n + m;
  Eigen::MatrixXd t(m + 1, cols + 1);
  t.setZero();
  t.block(0, 0, m, n) = a;
  t.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  t.block(0, cols, m, 1) = b;
  // Objective row: cost of artificials eliminated against the starting basis.
  for (Eigen::Index j = 0; j < n; ++j) t(m, j) = -a.col(j).sum();
  t(m, cols) = -b.sum();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) basis[static_cast<std::size_t>(r)] = n + r;

  const double piv_eps = 1e-12;
  for (long iter = 0; iter < 10000; ++iter) {
    // Bland: entering = lowest-index column with negative reduced cost.
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j)
      if (t(m, j) < -piv_eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best_ratio = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (t(r, enter) <= piv_eps) continue;
      const double ratio = t(r, cols) / t(r, enter);
      if (leave < 0 || ratio < best_ratio - 1e-15 ||
          (std::fabs(ratio - best_ratio) <= 1e-15 &&
           basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) break;  // unbounded below cannot happen for phase 1
    const double piv = t(leave, enter);
    t.row(leave) /= piv;
    for (Eigen::Index r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = t(r, enter);
      if (f != 0.0) t.row(r) -= f * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  const double artificial_sum = -t(m, cols);
  return artificial_sum <= tol;
}

}  // namespace detail

/// Store the training features as hull generators. Membership queries go
/// through LP feasibility, so redundant interior points are harmless and a
/// degenerate (affinely dependent) set only sets a flag.
inline void build_hull(GpcaModel& model, const std::vector<Eigen::VectorXd>& training_features) {
  if (training_features.size() < 2)
    throw ParameterError("build_hull: need at least 2 feature points");
  const Eigen::Index d = training_features[0].size();
  for (const auto& f : training_features)
    if (f.size() != d) throw ParameterError("build_hull: feature dimension mismatch");

  model.hull_points = training_features;
  model.hull_centroid = Eigen::VectorXd::Zero(d);
  for (const auto& f : training_features) model.hull_centroid += f;
  model.hull_centroid /= static_cast<double>(training_features.size());

  Eigen::MatrixXd centered(d, static_cast<Eigen::Index>(training_features.size()));
  for (std::size_t i = 0; i < training_features.size(); ++i)
    centered.col(static_cast<Eigen::Index>(i)) = training_features[i] - model.hull_centroid;
  const auto rank = Eigen::FullPivLU<Eigen::MatrixXd>(centered).rank();
  model.hull_degenerate = rank < d;
}

/// True iff centroid + (x - centroid)/tolerance lies in the convex hull of
/// the stored points, decided by LP feasibility with a small slack.
/// tolerance < 1 shrinks the acceptance region about the centroid.
inline bool hull_contains(const GpcaModel& model, const Eigen::VectorXd& x, double tolerance,
                          double slack = 1e-8) {
  if (model.hull_points.empty()) throw ParameterError("hull_contains: hull not built");
  if (!(tolerance > 0.0)) throw ParameterError("hull_contains: tolerance must be positive");
  const Eigen::Index d = model.hull_centroid.size();
  if (x.size() != d) throw ParameterError("hull_contains: query dimension mismatch");

  const Eigen::VectorXd query = model.hull_centroid + (x - model.hull_centroid) / tolerance;

  // Scale coordinates to O(1) so the feasibility slack is meaningful.
  double span = 1e-12;
  for (const auto& p : model.hull_points)
    span = std::max(span, (p - model.hull_centroid).cwiseAbs().maxCoeff());
  span = std::max(span, (query - model.hull_centroid).cwiseAbs().maxCoeff());

  const Eigen::Index n = static_cast<Eigen::Index>(model.hull_points.size());
  Eigen::MatrixXd a(d + 1, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    a.block(0, j, d, 1) =
        (model.hull_points[static_cast<std::size_t>(j)] - model.hull_centroid) / span;
    a(d, j) = 1.0;
  }
  Eigen::VectorXd b(d + 1);
  b.head(d) = (query - model.hull_centroid) / span;
  b(d) = 1.0;
  return detail::lp_equality_feasible(a, b, slack);
}

}  // namespace udsift
