#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "udsift/simulate.hpp"
#include "udsift/types.hpp"

namespace udsift {

/// Per-column envelope and torso tracks in Hz, smoothed by a moving average.
struct EnvelopeSet {
  std::vector<double> upper_hz;
  std::vector<double> lower_hz;
  std::vector<double> torso_hz;
  double dt_s = 1.0;   // column spacing
  bool empty = false;  // no column carried any energy
};

enum class RuleOutcome { Pass, Minor, Fail, NotApplicable };

inline std::string to_string(RuleOutcome o) {
  switch (o) {
    case RuleOutcome::Pass: return "pass";
    case RuleOutcome::Minor: return "minor";
    case RuleOutcome::Fail: return "fail";
    case RuleOutcome::NotApplicable: return "n/a";
  }
  return "?";
}

struct RuleVerdict {
  RuleOutcome rule1_periodic = RuleOutcome::NotApplicable;
  RuleOutcome rule2_torso_below_legs = RuleOutcome::NotApplicable;
  RuleOutcome rule3_sign_consistency = RuleOutcome::NotApplicable;
  RuleOutcome overall = RuleOutcome::Pass;
};

/// All rule constants in one place so tests can pin them.
struct RuleThresholds {
  double energy_frac = 0.05;        // envelope support level, relative to column max
  int smooth_window = 11;           // moving-average length for envelope series
  double autocorr_pass = 0.4;       // rule 1
  double autocorr_minor = 0.25;
  double lag_min_s = 0.25;
  double lag_max_s = 1.5;
  double variance_floor_rel = 1e-6;  // rule 1 flatness gate, times (max envelope)^2
  double torso_ratio_pass = 0.8;     // rule 2
  double torso_ratio_minor = 0.95;
  double sign_leak_pass = 0.15;      // rule 3
  double sign_leak_minor = 0.35;
  double guard_band_hz = 25.0;
};

namespace detail {

inline std::vector<double> moving_average(const std::vector<double>& x, int window) {
  const int n = static_cast<int>(x.size());
  std::vector<double> out(x.size());
  const int half = window / 2;
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += x[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

/// Biased-normalized autocorrelation of the mean-removed series.
inline std::vector<double> autocorr_normalized(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> z(n);
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = x[i] - mean;
    denom += z[i] * z[i];
  }
  std::vector<double> r(n, 0.0);
  if (denom <= 0.0) return r;
  for (std::size_t l = 0; l < n; ++l) {
    double acc = 0.0;
    for (std::size_t t = 0; t + l < n; ++t) acc += z[t] * z[t + l];
    r[l] = acc / denom;
  }
  return r;
}

}  // namespace detail

/// Per column: upper/lower bounds of the support at energy_frac of the column
/// max, torso = frequency of the column argmax. Empty columns carry the
/// previous value forward (zero when leading). Series are then smoothed.
inline EnvelopeSet extract_envelopes(const Spectrogram& s, double energy_frac = 0.05,
                                     int smooth_window = 11) {
  validate(s, "extract_envelopes");
  const Eigen::Index rows = s.rows(), cols = s.cols();
  EnvelopeSet e;
  e.upper_hz.assign(static_cast<std::size_t>(cols), 0.0);
  e.lower_hz.assign(static_cast<std::size_t>(cols), 0.0);
  e.torso_hz.assign(static_cast<std::size_t>(cols), 0.0);
  e.dt_s = (cols > 1) ? (s.time_axis_s[1] - s.time_axis_s[0]) : 1.0;

  bool any = false;
  double prev_upper = 0.0, prev_lower = 0.0, prev_torso = 0.0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    Eigen::Index argmax = 0;
    double colmax = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r)
      if (s.values(r, c) > colmax) {
        colmax = s.values(r, c);
        argmax = r;
      }
    if (colmax <= 0.0) {
      e.upper_hz[static_cast<std::size_t>(c)] = prev_upper;
      e.lower_hz[static_cast<std::size_t>(c)] = prev_lower;
      e.torso_hz[static_cast<std::size_t>(c)] = prev_torso;
      continue;
    }
    any = true;
    const double level = energy_frac * colmax;
    Eigen::Index hi = argmax, lo = argmax;
    for (Eigen::Index r = rows - 1; r >= 0; --r)
      if (s.values(r, c) >= level) {
        hi = r;
        break;
      }
    for (Eigen::Index r = 0; r < rows; ++r)
      if (s.values(r, c) >= level) {
        lo = r;
        break;
      }
    prev_upper = s.freq_axis_hz[static_cast<std::size_t>(hi)];
    prev_lower = s.freq_axis_hz[static_cast<std::size_t>(lo)];
    prev_torso = s.freq_axis_hz[static_cast<std::size_t>(argmax)];
    e.upper_hz[static_cast<std::size_t>(c)] = prev_upper;
    e.lower_hz[static_cast<std::size_t>(c)] = prev_lower;
    e.torso_hz[static_cast<std::size_t>(c)] = prev_torso;
  }
  e.empty = !any;
  if (e.empty) return e;
  e.upper_hz = detail::moving_average(e.upper_hz, smooth_window);
  e.lower_hz = detail::moving_average(e.lower_hz, smooth_window);
  e.torso_hz = detail::moving_average(e.torso_hz, smooth_window);
  return e;
}

inline bool rules_apply_to(ActivityClass cls) {
  return cls == ActivityClass::Walking || cls == ActivityClass::Falling;
}

inline RuleVerdict check_rules(const EnvelopeSet& e, ActivityClass cls,
                               const RuleThresholds& th = {}) {
  RuleVerdict v;
  const bool applicable = rules_apply_to(cls);
  const bool periodic_class = (cls == ActivityClass::Walking);
  const std::size_t n = e.upper_hz.size();

  auto max_abs = [](const std::vector<double>& x) {
    double m = 0.0;
    for (double v2 : x) m = std::max(m, std::fabs(v2));
    return m;
  };

  // Rule 1: periodicity of the upper envelope (periodic classes only).
  if (periodic_class) {
    if (e.empty || n < 4) {
      v.rule1_periodic = RuleOutcome::Fail;
    } else {
      const double menv = max_abs(e.upper_hz);
      double mean = 0.0, var = 0.0;
      for (double x : e.upper_hz) mean += x;
      mean /= static_cast<double>(n);
      for (double x : e.upper_hz) var += (x - mean) * (x - mean);
      var /= static_cast<double>(n);
      if (var <= th.variance_floor_rel * menv * menv) {
        v.rule1_periodic = RuleOutcome::Fail;
      } else {
        const auto r = detail::autocorr_normalized(e.upper_hz);
        const int l_min = std::max<int>(1, static_cast<int>(std::ceil(th.lag_min_s / e.dt_s)));
        const int l_max =
            std::min<int>(static_cast<int>(n) - 2, static_cast<int>(std::floor(th.lag_max_s / e.dt_s)));
        double best = -1.0;
        for (int l = l_min; l <= l_max; ++l) {
          const std::size_t li = static_cast<std::size_t>(l);
          if (r[li] >= r[li - 1] && r[li] >= r[li + 1]) best = std::max(best, r[li]);
        }
        v.rule1_periodic = best >= th.autocorr_pass    ? RuleOutcome::Pass
                           : best >= th.autocorr_minor ? RuleOutcome::Minor
                                                       : RuleOutcome::Fail;
      }
    }
  }

  if (applicable) {
    // Rule 2: the strongest return must sit below the envelope extremes.
    if (e.empty) {
      v.rule2_torso_below_legs = RuleOutcome::Fail;
    } else {
      const double mt = max_abs(e.torso_hz);
      const double mu = std::max(max_abs(e.upper_hz), max_abs(e.lower_hz));
      if (mu <= 0.0) {
        v.rule2_torso_below_legs = RuleOutcome::Fail;
      } else {
        const double ratio = mt / mu;
        v.rule2_torso_below_legs = ratio <= th.torso_ratio_pass    ? RuleOutcome::Pass
                                   : ratio <= th.torso_ratio_minor ? RuleOutcome::Minor
                                                                   : RuleOutcome::Fail;
      }
    }

    // Rule 3: energy outside the clutter guard band must keep one sign.
    if (e.empty) {
      v.rule3_sign_consistency = RuleOutcome::Fail;
    } else {
      double pos = 0.0, neg = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double up = e.upper_hz[i], lo = e.lower_hz[i];
        pos += std::max(0.0, up - std::max(lo, th.guard_band_hz));
        neg += std::max(0.0, std::min(up, -th.guard_band_hz) - lo);
      }
      if (pos + neg <= 0.0) {
        v.rule3_sign_consistency = RuleOutcome::Fail;  // faint: nothing beyond clutter
      } else {
        const double leak = std::min(pos, neg) / std::max(pos, neg);
        v.rule3_sign_consistency = leak <= th.sign_leak_pass    ? RuleOutcome::Pass
                                   : leak <= th.sign_leak_minor ? RuleOutcome::Minor
                                                                : RuleOutcome::Fail;
      }
    }
  }

  // Overall: Pass iff every applicable rule passes, Fail iff all fail.
  int n_applicable = 0, n_pass = 0, n_fail = 0;
  for (RuleOutcome o : {v.rule1_periodic, v.rule2_torso_below_legs, v.rule3_sign_consistency}) {
    if (o == RuleOutcome::NotApplicable) continue;
    ++n_applicable;
    if (o == RuleOutcome::Pass) ++n_pass;
    if (o == RuleOutcome::Fail) ++n_fail;
  }
  if (n_applicable == 0 || n_pass == n_applicable)
    v.overall = RuleOutcome::Pass;
  else if (n_fail == n_applicable)
    v.overall = RuleOutcome::Fail;
  else
    v.overall = RuleOutcome::Minor;
  return v;
}

/// Convenience: envelopes + rules in one step.
inline RuleVerdict check_rules(const Spectrogram& s, ActivityClass cls,
                               const RuleThresholds& th = {}) {
  return check_rules(extract_envelopes(s, th.energy_frac, th.smooth_window), cls, th);
}

}  // namespace udsift
