#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "udsift/csv.hpp"
#include "udsift/hull.hpp"
#include "udsift/kinrules.hpp"
#include "udsift/manifest.hpp"
#include "udsift/parallel.hpp"
#include "udsift/pipeline.hpp"
#include "udsift/png_gray.hpp"

namespace udsift {

struct ClassSiftCounts {
  std::string class_label;
  int n_input = 0;
  int n_accepted = 0;
  int n_rejected_hull = 0;
  int n_rejected_rules = 0;
};

struct SiftReport {
  std::vector<ClassSiftCounts> classes;  // lexicographic
  double tolerance = 1.0;
};

struct SiftOptions {
  int p1 = 2;
  int p2 = 2;
  double tolerance = 1.0;
  bool apply_rules = true;
  RuleThresholds rules;
  // axis fallback for signatures loaded from axis-free files
  double fallback_fs_hz = 1200.0;
  double fallback_duration_s = 4.0;
};

struct SiftResult {
  Manifest accepted;
  SiftReport report;
  std::map<std::string, GpcaModel> models;  // per-class, with hulls
};

/// Algorithm: per class, learn the subspaces and feature hull from the real
/// samples, project each candidate, and keep those inside the
/// tolerance-scaled hull whose rule verdict (walking/falling, when enabled)
/// is not an outright failure. Rule rejections are counted before hull
/// rejections.
inline SiftResult sift(const Manifest& real_manifest, const Manifest& candidate_manifest,
                       const SiftOptions& opt = {}) {
  if (!(opt.tolerance > 0.0)) throw ParameterError("sift: tolerance must be positive");
  auto real_by_cls = by_class(real_manifest);
  auto cand_by_cls = by_class(candidate_manifest);

  std::string missing;
  for (const auto& [cls, recs] : cand_by_cls)
    if (!real_by_cls.count(cls)) missing += (missing.empty() ? "" : ", ") + cls;
  if (!missing.empty())
    throw ParameterError("sift: candidate classes missing from the real manifest: " + missing);

  SiftResult result;
  result.accepted.dir = candidate_manifest.dir;
  result.report.tolerance = opt.tolerance;

  for (const auto& [cls, cand_recs] : cand_by_cls) {
    const auto& real_recs = real_by_cls.at(cls);
    if (real_recs.size() < 2)
      throw ParameterError("sift: class needs at least 2 real samples: " + cls);

    std::vector<Eigen::MatrixXd> real_images(real_recs.size());
    parallel_for(real_recs.size(), [&](std::size_t i) {
      real_images[i] = read_signature(real_manifest.resolve(*real_recs[i])).values;
    });
    GpcaModel model = fit_gpca(real_images, opt.p1, opt.p2);
    model.class_label = cls;
    std::vector<Eigen::VectorXd> features(real_images.size());
    for (std::size_t i = 0; i < real_images.size(); ++i)
      features[i] = project_features(model, real_images[i]);
    build_hull(model, features);

    ClassSiftCounts counts;
    counts.class_label = cls;
    counts.n_input = static_cast<int>(cand_recs.size());

    // Only the named activities carry rule semantics; foreign labels are
    // sifted by hull membership alone.
    const bool known_activity =
        std::find(activity_names().begin(), activity_names().end(), cls) != activity_names().end();
    const bool rules_gate =
        opt.apply_rules && known_activity && rules_apply_to(activity_from_string(cls));
    std::vector<int> outcome(cand_recs.size());  // 0 accept, 1 hull, 2 rules
    parallel_for(cand_recs.size(), [&](std::size_t i) {
      Spectrogram img = read_signature(candidate_manifest.resolve(*cand_recs[i]));
      apply_default_axes(img, opt.fallback_fs_hz, opt.fallback_duration_s);
      if (rules_gate) {
        const RuleVerdict v = check_rules(img, activity_from_string(cls), opt.rules);
        if (v.overall == RuleOutcome::Fail) {
          outcome[i] = 2;
          return;
        }
      }
      const Eigen::VectorXd f = project_features(model, img.values);
      outcome[i] = hull_contains(model, f, opt.tolerance) ? 0 : 1;
    });

    for (std::size_t i = 0; i < cand_recs.size(); ++i) {
      if (outcome[i] == 0) {
        result.accepted.records.push_back(*cand_recs[i]);
        ++counts.n_accepted;
      } else if (outcome[i] == 1) {
        ++counts.n_rejected_hull;
      } else {
        ++counts.n_rejected_rules;
      }
    }
    result.report.classes.push_back(counts);
    result.models.emplace(cls, std::move(model));
  }
  return result;
}

inline std::string sift_report_csv(const SiftReport& report) {
  std::string out = "class,n_input,n_accepted,n_rejected_hull,n_rejected_rules,tolerance\n";
  for (const auto& c : report.classes)
    out += c.class_label + "," + std::to_string(c.n_input) + "," + std::to_string(c.n_accepted) +
           "," + std::to_string(c.n_rejected_hull) + "," + std::to_string(c.n_rejected_rules) +
           "," + csv_num(report.tolerance, 2) + "\n";
  return out;
}

}  // namespace udsift
