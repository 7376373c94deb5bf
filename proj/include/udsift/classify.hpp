#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "udsift/csv.hpp"
#include "udsift/gpca.hpp"
#include "udsift/manifest.hpp"
#include "udsift/parallel.hpp"
#include "udsift/png_gray.hpp"

namespace udsift {

/// Minimum-distance classifier over pooled bilinear-PCA features: one shared
/// subspace pair for all classes, one mean feature vector per class.
struct MdcModel {
  GpcaModel gpca;                       // class-agnostic, fit on the pooled pool
  std::vector<std::string> classes;     // lexicographic
  std::vector<Eigen::VectorXd> means;   // per class
};

struct EvalResult {
  double accuracy = 0.0;
  std::vector<std::string> classes;
  Eigen::MatrixXd confusion_percent;  // rows = truth, each row sums to 100
  std::vector<double> per_class_recall;
};

/// Pooled subspaces work better with a slightly larger core than the
/// per-class sifting model; D = 16 separates eight classes comfortably.
inline MdcModel train_mdc(const Manifest& manifest, int p1 = 4, int p2 = 4) {
  auto grouped = by_class(manifest);
  if (grouped.size() < 2) throw ParameterError("train_mdc: need at least 2 classes");
  for (const auto& [cls, recs] : grouped)
    if (recs.empty()) throw ParameterError("train_mdc: class has no samples: " + cls);

  std::vector<Eigen::MatrixXd> images(manifest.records.size());
  parallel_for(manifest.records.size(), [&](std::size_t i) {
    images[i] = read_signature(manifest.resolve(manifest.records[i])).values;
  });

  MdcModel model;
  model.gpca = fit_gpca(images, p1, p2);
  for (const auto& [cls, recs] : grouped) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(model.gpca.feature_dim());
    for (const SignatureRecord* rec : recs) {
      // records appear in manifest order; reuse the loaded images
      const std::size_t idx = static_cast<std::size_t>(rec - manifest.records.data());
      mean += project_features(model.gpca, images[idx]);
    }
    mean /= static_cast<double>(recs.size());
    model.classes.push_back(cls);
    model.means.push_back(std::move(mean));
  }
  return model;
}

/// Nearest class mean in Euclidean distance; ties break toward the
/// lexicographically smaller label (classes are stored sorted).
inline std::string predict(const MdcModel& model, const Eigen::MatrixXd& image) {
  const Eigen::VectorXd f = project_features(model.gpca, image);
  // classes are stored sorted, so keeping the first minimum on ties breaks
  // toward the lexicographically smaller label
  std::size_t best = 0;
  double best_d = (f - model.means[0]).squaredNorm();
  for (std::size_t c = 1; c < model.means.size(); ++c) {
    const double d = (f - model.means[c]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return model.classes[best];
}

inline EvalResult evaluate(const MdcModel& model, const Manifest& manifest) {
  if (manifest.records.empty()) throw ParameterError("evaluate: empty manifest");
  std::map<std::string, int> class_index;
  for (std::size_t c = 0; c < model.classes.size(); ++c)
    class_index[model.classes[c]] = static_cast<int>(c);
  for (const auto& rec : manifest.records)
    if (!class_index.count(rec.class_label))
      throw ParameterError("evaluate: class not in model: " + rec.class_label);

  const int n_classes = static_cast<int>(model.classes.size());
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(n_classes, n_classes);
  std::vector<int> predicted(manifest.records.size());
  parallel_for(manifest.records.size(), [&](std::size_t i) {
    const auto img = read_signature(manifest.resolve(manifest.records[i]));
    predicted[i] = class_index.at(predict(model, img.values));
  });
  int correct = 0;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const int truth = class_index.at(manifest.records[i].class_label);
    counts(truth, predicted[i]) += 1;
    if (truth == predicted[i]) ++correct;
  }

  EvalResult r;
  r.accuracy = static_cast<double>(correct) / static_cast<double>(manifest.records.size());
  r.classes = model.classes;
  r.confusion_percent = Eigen::MatrixXd::Zero(n_classes, n_classes);
  r.per_class_recall.assign(static_cast<std::size_t>(n_classes), 0.0);
  for (int t = 0; t < n_classes; ++t) {
    const int row_total = counts.row(t).sum();
    if (row_total == 0) continue;
    for (int p = 0; p < n_classes; ++p)
      r.confusion_percent(t, p) = 100.0 * counts(t, p) / static_cast<double>(row_total);
    r.per_class_recall[static_cast<std::size_t>(t)] =
        static_cast<double>(counts(t, t)) / static_cast<double>(row_total);
  }
  return r;
}

/// eval.csv: header, one confusion row per class (percent, truth in rows,
/// recall appended), then an accuracy line.
inline std::string eval_csv(const EvalResult& r) {
  std::string out = "class";
  for (const auto& c : r.classes) out += "," + c;
  out += ",recall\n";
  for (std::size_t t = 0; t < r.classes.size(); ++t) {
    out += r.classes[t];
    for (std::size_t p = 0; p < r.classes.size(); ++p)
      out += "," + csv_num(r.confusion_percent(static_cast<Eigen::Index>(t),
                                               static_cast<Eigen::Index>(p)), 2);
    out += "," + csv_num(r.per_class_recall[t], 4) + "\n";
  }
  out += "accuracy," + csv_num(r.accuracy, 4) + "\n";
  return out;
}

}  // namespace udsift
