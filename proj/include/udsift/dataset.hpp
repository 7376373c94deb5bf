#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "udsift/manifest.hpp"
#include "udsift/parallel.hpp"
#include "udsift/pipeline.hpp"
#include "udsift/sgrm.hpp"

namespace udsift {

struct DatasetOptions {
  std::vector<ActivityClass> classes = {
      ActivityClass::Bending,  ActivityClass::Falling,  ActivityClass::Gesture,
      ActivityClass::Kneeling, ActivityClass::Reaching, ActivityClass::Sitting,
      ActivityClass::Standing, ActivityClass::Walking};
  int n_per_class = 60;
  double defect_fraction = 0.0;  // in [0, 1)
  std::uint64_t seed = 0;
  std::string origin_clean = "synthetic";  // clean records; defects are always "defect"
  bool emit_raw = false;                   // also write .sgts raw series
  bool attach_verdicts = true;
  std::vector<double> aspect_choices_deg = {0.0, 30.0, 45.0, 60.0};
};

/// The rule-violating defect kinds cycled through by make_dataset. Clone is
/// excluded here: it breaks diversity, not kinematics, so it would neither
/// fail a rule nor leave the feature hull.
inline const std::vector<DefectKind>& dataset_defect_kinds() {
  static const std::vector<DefectKind> kinds = {DefectKind::MirrorBleed, DefectKind::NoTarget,
                                                DefectKind::Aperiodic, DefectKind::TorsoAboveLegs};
  return kinds;
}

/// Simulate, preprocess and write a labeled dataset: SGRM files plus a JSONL
/// manifest (and optionally the raw series). Exactly round(defect_fraction*n)
/// records per class are defect-injected and labeled origin="defect".
/// Byte-identical output for a fixed seed and options.
inline Manifest make_dataset(const RadarConfig& cfg, const DatasetOptions& opt,
                             const PipelineParams& pp, const std::string& out_dir) {
  validate(cfg);
  if (opt.n_per_class < 1) throw ParameterError("make_dataset: n_per_class must be >= 1");
  if (opt.defect_fraction < 0.0 || opt.defect_fraction >= 1.0)
    throw ParameterError("make_dataset: defect_fraction must lie in [0, 1)");
  if (opt.classes.empty()) throw ParameterError("make_dataset: no classes requested");

  std::filesystem::create_directories(out_dir);
  const int n_defect = static_cast<int>(std::lround(opt.defect_fraction * opt.n_per_class));

  struct Job {
    ActivityClass cls;
    int index;
    bool defect;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t ci = 0; ci < opt.classes.size(); ++ci)
    for (int i = 0; i < opt.n_per_class; ++i)
      jobs.push_back({opt.classes[ci], i, i >= opt.n_per_class - n_defect,
                      derive_seed(opt.seed, ci, static_cast<std::uint64_t>(i))});

  Manifest manifest;
  manifest.dir = out_dir;
  manifest.records.resize(jobs.size());

  parallel_for(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    Rng rng(job.seed);
    RadarConfig sample_cfg = cfg;
    sample_cfg.aspect_deg =
        opt.aspect_choices_deg[static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(opt.aspect_choices_deg.size()) - 1))];
    const MotionScript script = random_script(job.cls, rng, job.seed);
    const TimeSeries raw = simulate(sample_cfg, script);
    Spectrogram img = preprocess_series(raw, pp);
    if (job.defect) {
      const auto& kinds = dataset_defect_kinds();
      const DefectKind kind = kinds[static_cast<std::size_t>(job.index) % kinds.size()];
      img = inject_defect(img, kind, job.seed);
    }

    const std::string cls_name = to_string(job.cls);
    char base[64];
    std::snprintf(base, sizeof(base), "%s_%04d", cls_name.c_str(), job.index);
    const std::string rel = cls_name + "/" + base + ".sgrm";
    write_sgrm(img, (std::filesystem::path(out_dir) / rel).string());
    if (opt.emit_raw)
      write_sgts(raw, (std::filesystem::path(out_dir) / (cls_name + "/" + base + ".sgts")).string());

    SignatureRecord rec;
    rec.path = rel;
    rec.class_label = cls_name;
    rec.angle_deg = sample_cfg.aspect_deg;
    rec.origin = job.defect ? "defect" : opt.origin_clean;
    if (opt.attach_verdicts) {
      const RuleVerdict v = check_rules(img, job.cls, pp.rules);
      rec.verdicts["rule1"] = to_string(v.rule1_periodic);
      rec.verdicts["rule2"] = to_string(v.rule2_torso_below_legs);
      rec.verdicts["rule3"] = to_string(v.rule3_sign_consistency);
      rec.verdicts["overall"] = to_string(v.overall);
    }
    manifest.records[j] = std::move(rec);
  });

  write_manifest(manifest, (std::filesystem::path(out_dir) / "manifest.jsonl").string());
  if (opt.emit_raw) {
    Manifest raw_manifest = manifest;
    for (auto& rec : raw_manifest.records) {
      rec.path = rec.path.substr(0, rec.path.size() - 5) + ".sgts";
      rec.verdicts.clear();
    }
    write_manifest(raw_manifest, (std::filesystem::path(out_dir) / "manifest_raw.jsonl").string());
  }
  return manifest;
}

}  // namespace udsift
