#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "udsift/random.hpp"
#include "udsift/types.hpp"

namespace testutil {

/// Fresh scratch directory under the build tree; removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    dir_ = std::filesystem::temp_directory_path() /
           ("udsift_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }

private:
  std::filesystem::path dir_;
};

/// Random [0,1] grayscale spectrogram with plausible axes.
inline udsift::Spectrogram random_gray(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  udsift::Rng rng(seed);
  udsift::Spectrogram s;
  s.values.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) s.values(r, c) = rng.uniform01();
  s.values /= s.values.maxCoeff();
  s.freq_axis_hz.resize(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r)
    s.freq_axis_hz[static_cast<std::size_t>(r)] =
        -600.0 + 1200.0 * static_cast<double>(r) / static_cast<double>(rows - 1);
  s.time_axis_s.resize(static_cast<std::size_t>(cols));
  for (Eigen::Index c = 0; c < cols; ++c)
    s.time_axis_s[static_cast<std::size_t>(c)] =
        4.0 * (static_cast<double>(c) + 0.5) / static_cast<double>(cols);
  s.scale = udsift::ValueScale::GrayscaleNorm;
  return s;
}

}  // namespace testutil
