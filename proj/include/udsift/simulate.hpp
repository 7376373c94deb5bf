#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "udsift/random.hpp"
#include "udsift/types.hpp"

namespace udsift {

constexpr double kSpeedOfLight = 299792458.0;

enum class ActivityClass { Bending, Falling, Gesture, Kneeling, Reaching, Sitting, Standing, Walking };

inline const std::vector<std::string>& activity_names() {
  static const std::vector<std::string> names = {"bending",  "falling", "gesture", "kneeling",
                                                 "reaching", "sitting", "standing", "walking"};
  return names;
}

inline std::string to_string(ActivityClass c) { return activity_names()[static_cast<int>(c)]; }

inline ActivityClass activity_from_string(const std::string& name) {
  const auto& names = activity_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<ActivityClass>(i);
  throw ParameterError("unknown activity class: " + name);
}

struct RadarConfig {
  double carrier_hz = 25e9;
  double sample_rate_hz = 12.8e3;
  double duration_s = 4.0;
  double aspect_deg = 0.0;  // between line of sight and motion direction
  double snr_db = 15.0;     // complex AWGN level; infinity disables noise

  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
};

inline void validate(const RadarConfig& cfg) {
  if (!(cfg.carrier_hz > 0.0)) throw ParameterError("RadarConfig: carrier_hz must be positive");
  if (!(cfg.sample_rate_hz > 0.0))
    throw ParameterError("RadarConfig: sample_rate_hz must be positive");
  if (!(cfg.duration_s > 0.0)) throw ParameterError("RadarConfig: duration_s must be positive");
  if (cfg.aspect_deg < 0.0 || cfg.aspect_deg > 90.0)
    throw ParameterError("RadarConfig: aspect_deg must lie in [0, 90]");
}

/// One point scatterer: reflecting amplitude and radial velocity over time
/// (m/s, positive toward the radar, before aspect projection).
struct Scatterer {
  double amplitude = 1.0;
  double phase0 = 0.0;
  std::function<double(double)> radial_velocity_mps;
};

struct MotionScript {
  ActivityClass class_label = ActivityClass::Walking;
  std::vector<Scatterer> scatterers;
  std::uint64_t seed = 0;
};

namespace detail {

/// Smooth one-shot velocity pulse on [t0, t0+len].
inline double hump(double t, double t0, double len) {
  if (t < t0 || t > t0 + len) return 0.0;
  const double s = std::sin(std::numbers::pi * (t - t0) / len);
  return s * s;
}

/// Sharpened positive half-lobe for leg swings: one burst per cycle. The
/// seventh power keeps the burst narrow enough to survive the analysis
/// window's temporal smearing.
inline double swing_burst(double t, double cycle_hz, double phase) {
  const double s = std::sin(2.0 * std::numbers::pi * cycle_hz * t + phase);
  if (s <= 0.0) return 0.0;
  const double s2 = s * s;
  return s2 * s2 * s2 * s;
}

inline Scatterer clutter() {
  return {0.12, 0.0, [](double) { return 0.0; }};
}

}  // namespace detail

/// Walking: torso bob at the step rate, two phase-opposed legs with sharp
/// swing bursts, two counter-swinging arms at mid band, static clutter.
/// step_rate_hz counts steps (leg swings of either leg) per second.
inline MotionScript walking_script(double speed_mps, double step_rate_hz, double phase,
                                   std::uint64_t seed = 0) {
  MotionScript s;
  s.class_label = ActivityClass::Walking;
  s.seed = seed;
  const double v0 = speed_mps;
  const double cycle = step_rate_hz / 2.0;  // per-leg cadence
  const double leg_peak = 2.2 * v0;
  const double arm_amp = 0.35 * v0;
  s.scatterers.push_back(
      {1.0, 0.0, [=](double t) { return v0 + 0.15 * std::sin(2.0 * std::numbers::pi * step_rate_hz * t + phase); }});
  s.scatterers.push_back(
      {0.45, 0.7, [=](double t) { return leg_peak * detail::swing_burst(t, cycle, phase); }});
  s.scatterers.push_back(
      {0.45, 1.9, [=](double t) { return leg_peak * detail::swing_burst(t, cycle, phase + std::numbers::pi); }});
  s.scatterers.push_back(
      {0.25, 2.4, [=](double t) { return v0 + arm_amp * std::sin(2.0 * std::numbers::pi * cycle * t + phase + 0.5 * std::numbers::pi); }});
  s.scatterers.push_back(
      {0.25, 4.1, [=](double t) { return v0 + arm_amp * std::sin(2.0 * std::numbers::pi * cycle * t + phase + 1.5 * std::numbers::pi); }});
  s.scatterers.push_back(detail::clutter());
  return s;
}

/// Falling: fast one-shot torso pulse with faster, weaker limbs on top.
inline MotionScript falling_script(double onset_s, double torso_peak_mps, double limb_peak_mps,
                                   std::uint64_t seed = 0) {
  MotionScript s;
  s.class_label = ActivityClass::Falling;
  s.seed = seed;
  s.scatterers.push_back(
      {1.0, 0.0, [=](double t) { return torso_peak_mps * detail::hump(t, onset_s, 0.8); }});
  s.scatterers.push_back(
      {0.5, 1.1, [=](double t) { return limb_peak_mps * detail::hump(t, onset_s + 0.1, 0.7); }});
  s.scatterers.push_back(detail::clutter());
  return s;
}

inline MotionScript bending_script(double onset_s, double peak_mps, double gap_s,
                                   std::uint64_t seed = 0) {
  MotionScript s;
  s.class_label = ActivityClass::Bending;
  s.seed = seed;
  const double t1 = onset_s + 1.2 + gap_s;  // standing back up
  s.scatterers.push_back({1.0, 0.0, [=](double t) {
                            return peak_mps * (detail::hump(t, onset_s, 1.2) -
                                               0.85 * detail::hump(t, t1, 1.0));
                          }});
  s.scatterers.push_back({0.6, 0.9, [=](double t) {
                            return peak_mps * (-0.65 * detail::hump(t, onset_s, 1.2) +
                                               0.5 * detail::hump(t, t1, 1.0));
                          }});
  s.scatterers.push_back(detail::clutter());
  return s;
}

inline MotionScript gesture_script(double onset_s, double peak_mps, std::uint64_t seed = 0) {
  MotionScript s;
  s.class_label = ActivityClass::Gesture;
  s.seed = seed;
  s.scatterers.push_back({1.0, 0.0, [=](double t) {
                            double v = 0.0;
                            for (int k = 0; k < 4; ++k) {
                              const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                              v += sign * detail::hump(t, onset_s + 0.6 * k, 0.45);
                            }
                            return peak_mps * v;
                          }});
  s.scatterers.push_back(
      {0.25, 1.3, [=](double t) { return 0.15 * peak_mps * detail::hump(t, onset_s, 2.4); }});
  s.scatterers.push_back(detail::clutter());
  return s;
}

inline MotionScript kneeling_script(double onset_s, double peak_mps, std::uint64_t seed = 0) {
  MotionScript s;
  s.class_label = ActivityClass::Kneeling;
  s.seed = seed;
  s.scatterers.push_back({1.0, 0.0, [=](double t) {
                            return -peak_mps * detail::hump(t, onset_s, 0.4) +
                                   0.25 * peak_mps * detail::hump(t, onset_s + 0.5, 0.6);
                          }});
  s.scatterers.push_back(detail::clutter());
  return s;
}

inline MotionScript reaching_script(double onset_s, double peak_mps, std::uint64_t seed = 0) {
  MotionScript s;
  s.class_label = ActivityClass::Reaching;
  s.seed = seed;
  s.scatterers.push_back(
      {1.0, 0.0, [=](double t) { return peak_mps * detail::hump(t, onset_s, 1.3); }});
  s.scatterers.push_back(
      {0.5, 1.6, [=](double t) { return 0.8 * peak_mps * detail::hump(t, onset_s + 0.2, 1.1); }});
  s.scatterers.push_back(detail::clutter());
  return s;
}

inline MotionScript sitting_script(double onset_s, double peak_mps, std::uint64_t seed = 0) {
  MotionScript s;
  s.class_label = ActivityClass::Sitting;
  s.seed = seed;
  s.scatterers.push_back(
      {1.0, 0.0, [=](double t) { return -peak_mps * detail::hump(t, onset_s, 1.0); }});
  s.scatterers.push_back(
      {0.4, 0.8, [=](double t) { return -0.5 * peak_mps * detail::hump(t, onset_s + 0.1, 0.8); }});
  s.scatterers.push_back(detail::clutter());
  return s;
}

inline MotionScript standing_script(double onset_s, double peak_mps, std::uint64_t seed = 0) {
  MotionScript s;
  s.class_label = ActivityClass::Standing;
  s.seed = seed;
  s.scatterers.push_back(
      {1.0, 0.0, [=](double t) { return peak_mps * detail::hump(t, onset_s, 1.0); }});
  s.scatterers.push_back(
      {0.4, 2.2, [=](double t) { return 1.3 * peak_mps * detail::hump(t, onset_s, 0.7); }});
  s.scatterers.push_back(detail::clutter());
  return s;
}

/// Draw a script for the class with intra-class variation (speed, cadence,
/// onset, phase) from the given generator.
inline MotionScript random_script(ActivityClass cls, Rng& rng, std::uint64_t seed = 0) {
  switch (cls) {
    case ActivityClass::Walking: {
      const double speed = rng.uniform(1.0, 1.4);
      const double steps = rng.uniform(0.85, 1.2) * std::sqrt(speed / 1.2);  // cadence tracks speed
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      return walking_script(speed, steps, phase, seed);
    }
    case ActivityClass::Falling:
      return falling_script(rng.uniform(0.8, 1.6), rng.uniform(1.8, 2.2), rng.uniform(3.0, 3.4),
                            seed);
    case ActivityClass::Bending:
      return bending_script(rng.uniform(0.5, 0.9), rng.uniform(0.9, 1.2), rng.uniform(0.3, 0.7),
                            seed);
    case ActivityClass::Gesture:
      return gesture_script(rng.uniform(0.8, 1.4), rng.uniform(0.7, 1.0), seed);
    case ActivityClass::Kneeling:
      return kneeling_script(rng.uniform(1.0, 2.0), rng.uniform(1.4, 1.8), seed);
    case ActivityClass::Reaching:
      return reaching_script(rng.uniform(1.0, 1.8), rng.uniform(0.45, 0.65), seed);
    case ActivityClass::Sitting:
      return sitting_script(rng.uniform(1.0, 1.8), rng.uniform(0.9, 1.2), seed);
    case ActivityClass::Standing:
      return standing_script(rng.uniform(1.0, 1.8), rng.uniform(0.9, 1.2), seed);
  }
  throw ParameterError("random_script: bad class");
}

/// Point-scatterer synthesis: sum of a_i exp(-j 4π R_i(t)/λ), with R_i
/// integrated from the aspect-projected radial velocity, plus complex AWGN
/// at cfg.snr_db. Deterministic given (cfg, script, script.seed).
inline TimeSeries simulate(const RadarConfig& cfg, const MotionScript& script) {
  validate(cfg);
  if (script.scatterers.empty()) throw ParameterError("simulate: script has no scatterers");
  for (const auto& sc : script.scatterers)
    if (!(sc.amplitude > 0.0)) throw ParameterError("simulate: scatterer amplitude must be positive");

  const std::size_t n = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.sample_rate_hz));
  if (n == 0) throw ParameterError("simulate: duration too short for sample rate");
  const double dt = 1.0 / cfg.sample_rate_hz;
  const double cos_aspect = std::cos(cfg.aspect_deg * std::numbers::pi / 180.0);
  const double lambda = cfg.wavelength_m();
  const double phase_per_meter = 4.0 * std::numbers::pi / lambda;

  TimeSeries ts;
  ts.sample_rate_hz = cfg.sample_rate_hz;
  ts.samples.assign(n, {0.0, 0.0});
  double signal_power = 0.0;
  for (const auto& sc : script.scatterers) {
    double range = 0.0;  // relative range; absolute offset only shifts phase
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * dt;
      ts.samples[k] += std::polar(sc.amplitude, sc.phase0 - phase_per_meter * range);
      range -= sc.radial_velocity_mps(t) * cos_aspect * dt;
    }
  }
  for (const auto& z : ts.samples) signal_power += std::norm(z);
  signal_power /= static_cast<double>(n);

  if (std::isfinite(cfg.snr_db)) {
    const double noise_var = signal_power / std::pow(10.0, cfg.snr_db / 10.0);
    const double sigma = std::sqrt(noise_var / 2.0);
    Rng rng(derive_seed(script.seed, 0x6e6f697365ull));
    for (auto& z : ts.samples) {
      const double re = rng.normal();
      const double im = rng.normal();
      z += std::complex<double>(sigma * re, sigma * im);
    }
  }
  return ts;
}

/// Instantaneous Doppler frequency of each scatterer at the given times:
/// f = 2 v(t) cos(aspect) / λ.
inline std::vector<std::vector<double>> doppler_tracks(const RadarConfig& cfg,
                                                       const MotionScript& script,
                                                       const std::vector<double>& times) {
  validate(cfg);
  const double cos_aspect = std::cos(cfg.aspect_deg * std::numbers::pi / 180.0);
  const double k = 2.0 * cos_aspect / cfg.wavelength_m();
  std::vector<std::vector<double>> tracks(script.scatterers.size());
  for (std::size_t i = 0; i < script.scatterers.size(); ++i) {
    tracks[i].resize(times.size());
    for (std::size_t j = 0; j < times.size(); ++j)
      tracks[i][j] = k * script.scatterers[i].radial_velocity_mps(times[j]);
  }
  return tracks;
}

/// Ground-truth support: true where a bin center lies within half_bins bin
/// spacings of any scatterer track. Uses the spectrogram's own axes.
inline Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> support_mask(
    const RadarConfig& cfg, const MotionScript& script, const Spectrogram& geom,
    int half_bins) {
  const auto tracks = doppler_tracks(cfg, script, geom.time_axis_s);
  const double df = (geom.rows() > 1)
                        ? (geom.freq_axis_hz.back() - geom.freq_axis_hz.front()) /
                              static_cast<double>(geom.rows() - 1)
                        : 1.0;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask(geom.rows(), geom.cols());
  mask.setConstant(false);
  for (Eigen::Index c = 0; c < geom.cols(); ++c)
    for (const auto& track : tracks) {
      const double f = track[static_cast<std::size_t>(c)];
      for (Eigen::Index r = 0; r < geom.rows(); ++r)
        if (std::fabs(geom.freq_axis_hz[static_cast<std::size_t>(r)] - f) <=
            half_bins * df + 1e-12)
          mask(r, c) = true;
    }
  return mask;
}

enum class DefectKind { MirrorBleed, NoTarget, Aperiodic, TorsoAboveLegs, Clone };

inline const std::vector<std::string>& defect_names() {
  static const std::vector<std::string> names = {"mirror_bleed", "no_target", "aperiodic",
                                                 "torso_above_legs", "clone"};
  return names;
}

/// Fabricate a kinematically broken copy of a normalized spectrogram,
/// standing in for bad generator output. Deterministic given the seed.
inline Spectrogram inject_defect(const Spectrogram& s, DefectKind kind, std::uint64_t seed) {
  validate(s, "inject_defect");
  if (s.values.maxCoeff() > 1.0 + 1e-9)
    throw ParameterError("inject_defect: input must be normalized to [0,1]");
  Rng rng(derive_seed(seed, 0xdefec7ull, static_cast<std::uint64_t>(kind)));
  Spectrogram out = s;
  const Eigen::Index rows = s.rows(), cols = s.cols();

  switch (kind) {
    case DefectKind::MirrorBleed: {
      const double a = rng.uniform(0.75, 0.95);
      Eigen::MatrixXd mirrored = s.values.colwise().reverse();
      out.values = s.values + a * mirrored;
      break;
    }
    case DefectKind::NoTarget: {
      for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) out.values(r, c) = rng.uniform(0.0, 0.04);
      break;
    }
    case DefectKind::Aperiodic: {
      // Shuffle time blocks and crush each block's Doppler extent except one,
      // leaving a single aperiodic burst.
      const Eigen::Index block = 5;
      const Eigen::Index nblocks = (cols + block - 1) / block;
      std::vector<Eigen::Index> order(static_cast<std::size_t>(nblocks));
      for (Eigen::Index i = 0; i < nblocks; ++i) order[static_cast<std::size_t>(i)] = i;
      for (Eigen::Index i = nblocks - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[static_cast<std::size_t>(rng.uniform_int(0, i))]);
      const Eigen::Index keep = rng.uniform_int(0, nblocks - 1);
      const Eigen::Index dc = rows / 2;
      Eigen::MatrixXd scrambled(rows, cols);
      scrambled.setZero();
      for (Eigen::Index b = 0; b < nblocks; ++b) {
        const double g = (b == keep) ? 1.0 : rng.uniform(0.1, 0.25);
        const Eigen::Index src_b = order[static_cast<std::size_t>(b)];
        for (Eigen::Index j = 0; j < block; ++j) {
          const Eigen::Index dst_c = b * block + j;
          const Eigen::Index src_c = src_b * block + j;
          if (dst_c >= cols || src_c >= cols) continue;
          for (Eigen::Index r = 0; r < rows; ++r) {
            const double rel = static_cast<double>(r - dc) / g;
            const Eigen::Index src_r = dc + static_cast<Eigen::Index>(std::llround(rel));
            if (src_r >= 0 && src_r < rows) scrambled(r, dst_c) = s.values(src_r, src_c);
          }
        }
      }
      out.values = scrambled;
      break;
    }
    case DefectKind::TorsoAboveLegs: {
      // Rotate each column's occupied band so the strongest return lands at
      // the outer band edge: torso and limb bandwidths trade places.
      const Eigen::Index dc = rows / 2;
      const double floor_level = 0.02;
      Eigen::MatrixXd swapped = Eigen::MatrixXd::Zero(rows, cols);
      for (Eigen::Index c = 0; c < cols; ++c) {
        Eigen::Index peak_row = 0;
        double peak = 0.0;
        for (Eigen::Index r = 0; r < rows; ++r)
          if (s.values(r, c) > peak) {
            peak = s.values(r, c);
            peak_row = r;
          }
        if (peak < floor_level) continue;
        const bool positive_side = peak_row >= dc;
        Eigen::Index extent = 0;
        for (Eigen::Index r = 0; r < rows; ++r)
          if (s.values(r, c) >= floor_level) {
            const Eigen::Index rel = positive_side ? r - dc : dc - r;
            extent = std::max(extent, rel);
          }
        const Eigen::Index span = extent + 1;
        const Eigen::Index peak_rel = positive_side ? peak_row - dc : dc - peak_row;
        const Eigen::Index shift = (extent - peak_rel + span) % span;
        for (Eigen::Index r = 0; r < rows; ++r) {
          const Eigen::Index rel = positive_side ? r - dc : dc - r;
          if (rel < 0 || rel > extent) {
            swapped(r, c) = s.values(r, c);  // off-band content untouched
            continue;
          }
          const Eigen::Index dst_rel = (rel + shift) % span;
          const Eigen::Index dst = positive_side ? dc + dst_rel : dc - dst_rel;
          swapped(dst, c) = std::max(swapped(dst, c), s.values(r, c));
        }
      }
      out.values = swapped;
      break;
    }
    case DefectKind::Clone: {
      for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
          out.values(r, c) =
              std::min(1.0, std::max(0.0, s.values(r, c) + rng.uniform(-0.01, 0.01)));
      break;
    }
  }

  const double m = out.values.maxCoeff();
  if (m > 0.0 && m != 1.0) out.values /= m;
  out.scale = ValueScale::GrayscaleNorm;
  return out;
}

}  // namespace udsift
