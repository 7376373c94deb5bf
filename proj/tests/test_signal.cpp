#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "udsift/random.hpp"
#include "udsift/signal.hpp"
#include "support/oracles.hpp"

using namespace udsift;

namespace {

TimeSeries tone(double freq_hz, double fs, std::size_t n, double amp = 1.0) {
  TimeSeries ts;
  ts.sample_rate_hz = fs;
  ts.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    ts.samples[k] = std::polar(amp, 2.0 * std::numbers::pi * freq_hz * t);
  }
  return ts;
}

TimeSeries random_series(double fs, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  TimeSeries ts;
  ts.sample_rate_hz = fs;
  ts.samples.resize(n);
  for (auto& z : ts.samples) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return ts;
}

int argmax_col(const Eigen::MatrixXd& m, int col) {
  Eigen::Index r = 0;
  m.col(col).maxCoeff(&r);
  return static_cast<int>(r);
}

}  // namespace

TEST_CASE("resample 12.8 kHz -> 1.2 kHz length arithmetic") {
  const auto in = random_series(12800.0, 51200, 1);
  const auto out = resample(in, 1200.0);
  CHECK(out.sample_rate_hz == 1200.0);
  CHECK(out.samples.size() == 4800);  // ratio 3/32
}

TEST_CASE("resample identity when target equals source") {
  const auto in = random_series(12800.0, 4096, 2);
  const auto out = resample(in, 12800.0);
  REQUIRE(out.samples.size() == in.samples.size());
  for (std::size_t i = 0; i < in.samples.size(); ++i) CHECK(out.samples[i] == in.samples[i]);
}

TEST_CASE("resample keeps a 50 Hz tone at 50 Hz (direct-DFT oracle)") {
  const auto in = tone(50.0, 12800.0, 51200);
  const auto out = resample(in, 1200.0);
  // DFT of the full resampled series: peak bin within one bin of 50 Hz.
  const auto spec = oracle::dft_naive(out.samples);
  std::size_t kmax = 0;
  double vmax = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k)
    if (std::norm(spec[k]) > vmax) {
      vmax = std::norm(spec[k]);
      kmax = k;
    }
  const double bin_hz = 1200.0 / static_cast<double>(out.samples.size());
  const double peak_hz = static_cast<double>(kmax) * bin_hz;  // tone is positive-frequency
  CHECK(std::fabs(peak_hz - 50.0) <= bin_hz);
}

TEST_CASE("resample of band-limited tones preserves frequency within one bin") {
  for (double f0 : {25.0, 150.0, 400.0}) {
    const auto in = tone(f0, 12800.0, 25600);
    const auto out = resample(in, 1600.0);  // ratio 1/8
    const auto spec = oracle::dft_naive(out.samples);
    std::size_t kmax = 0;
    double vmax = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k)
      if (std::norm(spec[k]) > vmax) {
        vmax = std::norm(spec[k]);
        kmax = k;
      }
    const double bin_hz = 1600.0 / static_cast<double>(out.samples.size());
    CHECK(std::fabs(static_cast<double>(kmax) * bin_hz - f0) <= bin_hz);
  }
}

TEST_CASE("resample rejects unrepresentable ratios") {
  const auto in = random_series(12800.0, 1024, 3);
  CHECK_THROWS_AS(resample(in, 12800.0 * std::numbers::pi / 7.0), ParameterError);
}

TEST_CASE("stft matches the direct per-frame DFT oracle") {
  StftParams p;
  p.window_len = 128;
  p.overlap_len = 64;
  p.nfft = 256;
  const auto ts = random_series(1200.0, 1500, 4);
  const auto s = stft_spectrogram(ts, p);
  const auto ref = oracle::spectrogram_naive(ts.samples, p.window_len, p.overlap_len, p.nfft);
  REQUIRE(s.values.rows() == ref.rows());
  REQUIRE(s.values.cols() == ref.cols());
  CHECK((s.values - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("stft with non-power-of-two nfft matches the oracle") {
  StftParams p;
  p.window_len = 100;
  p.overlap_len = 37;
  p.nfft = 135;  // exercises the chirp-z path
  const auto ts = random_series(1000.0, 800, 5);
  const auto s = stft_spectrogram(ts, p);
  const auto ref = oracle::spectrogram_naive(ts.samples, p.window_len, p.overlap_len, p.nfft);
  CHECK((s.values - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("stft places a +100 Hz exponential at the right bin") {
  StftParams p;  // paper operating point
  p.window_len = 512;
  p.overlap_len = 256;
  p.nfft = 1024;
  const auto ts = tone(100.0, 1200.0, 4800);
  const auto s = stft_spectrogram(ts, p);
  const int expected_cols = (4800 - 512) / 256 + 1;
  REQUIRE(s.values.cols() == expected_cols);
  REQUIRE(s.values.rows() == 1024);
  const int dc_row = 1024 / 2;
  const int expected = dc_row + static_cast<int>(std::lround(100.0 / 1200.0 * 1024.0));  // +85
  for (int c = 0; c < expected_cols; ++c) CHECK(argmax_col(s.values, c) == expected);
  CHECK(s.freq_axis_hz[static_cast<std::size_t>(dc_row)] == 0.0);
}

TEST_CASE("stft of all-zero input is all zero") {
  TimeSeries ts;
  ts.sample_rate_hz = 1200.0;
  ts.samples.assign(2048, {0.0, 0.0});
  StftParams p;
  const auto s = stft_spectrogram(ts, p);
  CHECK(s.values.maxCoeff() == 0.0);
}

TEST_CASE("stft frequency-shift property moves the argmax by round(f0/fs*nfft)") {
  StftParams p;
  p.window_len = 256;
  p.overlap_len = 128;
  p.nfft = 512;
  const double fs = 1200.0;
  auto base = random_series(fs, 2000, 6);
  // Band-limit the random series so the argmax is stable: use a two-tone mix.
  base = tone(30.0, fs, 2000);
  for (std::size_t k = 0; k < base.samples.size(); ++k)
    base.samples[k] += 0.5 * std::polar(1.0, 2.0 * std::numbers::pi * -90.0 *
                                                 static_cast<double>(k) / fs);
  const auto s0 = stft_spectrogram(base, p);

  const double f0 = 200.0;
  TimeSeries shifted = base;
  for (std::size_t k = 0; k < shifted.samples.size(); ++k)
    shifted.samples[k] *=
        std::polar(1.0, 2.0 * std::numbers::pi * f0 * static_cast<double>(k) / fs);
  const auto s1 = stft_spectrogram(shifted, p);

  const int delta = static_cast<int>(std::lround(f0 / fs * p.nfft));
  for (int c = 0; c < s0.values.cols(); ++c)
    CHECK(argmax_col(s1.values, c) == argmax_col(s0.values, c) + delta);
}

TEST_CASE("stft Parseval check against windowed-frame energy") {
  StftParams p;
  p.window_len = 200;
  p.overlap_len = 100;
  p.nfft = 256;
  const auto ts = random_series(1000.0, 1000, 7);
  const auto s = stft_spectrogram(ts, p);
  const auto win = hanning_periodic(p.window_len);
  const int hop = p.window_len - p.overlap_len;
  for (int c = 0; c < s.values.cols(); ++c) {
    double frame_energy = 0.0;
    for (int m = 0; m < p.window_len; ++m)
      frame_energy +=
          std::norm(ts.samples[static_cast<std::size_t>(c * hop + m)] * win[static_cast<std::size_t>(m)]);
    const double column_sum = s.values.col(c).sum();
    CHECK(column_sum == Catch::Approx(p.nfft * frame_energy).epsilon(1e-9));
  }
}

TEST_CASE("stft rejects a series shorter than one window") {
  auto ts = random_series(1200.0, 100, 8);
  StftParams p;  // window 512
  CHECK_THROWS_AS(stft_spectrogram(ts, p), ParameterError);
  p.window_len = 64;
  p.overlap_len = 64;
  p.nfft = 64;
  CHECK_THROWS_AS(stft_spectrogram(ts, p), ParameterError);  // overlap >= window
}

TEST_CASE("to_grayscale_image normalization contract") {
  const auto ts = random_series(1200.0, 4800, 9);
  StftParams p;
  const auto s = stft_spectrogram(ts, p);
  const auto g = to_grayscale_image(s, 100, 100, 45.0);
  REQUIRE(g.values.rows() == 100);
  REQUIRE(g.values.cols() == 100);
  CHECK(g.values.minCoeff() >= 0.0);
  CHECK(g.values.maxCoeff() == 1.0);
  CHECK(g.scale == ValueScale::GrayscaleNorm);
  CHECK(g.freq_axis_hz.size() == 100);
  CHECK(g.time_axis_s.size() == 100);
  CHECK(g.freq_axis_hz.front() < g.freq_axis_hz.back());
}

TEST_CASE("to_grayscale_image of all-zero input stays zero") {
  Spectrogram s;
  s.values = Eigen::MatrixXd::Zero(64, 32);
  s.freq_axis_hz.resize(64);
  for (int i = 0; i < 64; ++i) s.freq_axis_hz[static_cast<std::size_t>(i)] = i;
  s.time_axis_s.resize(32);
  for (int i = 0; i < 32; ++i) s.time_axis_s[static_cast<std::size_t>(i)] = i;
  const auto g = to_grayscale_image(s, 16, 16, 45.0);
  CHECK(g.values.maxCoeff() == 0.0);
}

TEST_CASE("to_grayscale_image maps a constant grid to all ones") {
  Spectrogram s;
  s.values = Eigen::MatrixXd::Constant(40, 40, 3.7);
  s.freq_axis_hz.resize(40);
  s.time_axis_s.resize(40);
  for (int i = 0; i < 40; ++i) {
    s.freq_axis_hz[static_cast<std::size_t>(i)] = i;
    s.time_axis_s[static_cast<std::size_t>(i)] = i;
  }
  const auto g = to_grayscale_image(s, 20, 20, 45.0);
  CHECK(g.values.minCoeff() == 1.0);
  CHECK(g.values.maxCoeff() == 1.0);
}

TEST_CASE("to_grayscale_image is idempotent at a fixed size") {
  const auto ts = random_series(1200.0, 4800, 10);
  StftParams p;
  const auto s = stft_spectrogram(ts, p);
  const auto g1 = to_grayscale_image(s, 100, 100, 45.0);
  const auto g2 = to_grayscale_image(g1, 100, 100, 45.0);
  CHECK((g1.values - g2.values).cwiseAbs().maxCoeff() <= 1e-12);
  for (std::size_t i = 0; i < g1.freq_axis_hz.size(); ++i)
    CHECK(g1.freq_axis_hz[i] == g2.freq_axis_hz[i]);
}

TEST_CASE("to_grayscale_image supports the 64x64 interchange size") {
  const auto ts = random_series(1200.0, 4800, 11);
  const auto s = stft_spectrogram(ts, StftParams{});
  const auto g = to_grayscale_image(s, 64, 64, 45.0);
  CHECK(g.values.rows() == 64);
  CHECK(g.values.cols() == 64);
}
