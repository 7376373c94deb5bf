#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "udsift/types.hpp"

namespace udsift {

// SGRM spectrogram container:
//   "SGRM" | u32 rows | u32 cols | u32 flags | f32 row-major values
//   | optional f32 freq axis (rows) | optional f32 time axis (cols)
// flags bit0: axes present, bit1: values are normalized grayscale.
//
// SGTS raw series container:
//   "SGTS" | u32 n | f64 sample_rate_hz | f32 I/Q interleaved

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f32(std::string& buf, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(buf, bits);
}

inline void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

class ByteReader {
public:
  ByteReader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  void magic(const char* m) {
    need(4);
    if (std::memcmp(data_.data() + pos_, m, 4) != 0)
      throw FormatError(path_ + ": bad magic at byte 0, expected \"" + m + "\"");
    pos_ += 4;
  }
  std::size_t offset() const { return pos_; }
  void need(std::size_t n) const {
    if (pos_ + n > data_.size())
      throw FormatError(path_ + ": truncated at byte " + std::to_string(pos_) + " (need " +
                        std::to_string(n) + " more bytes)");
  }

private:
  const std::string& data_;
  std::string path_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("read failure: " + path);
  return data;
}

inline void write_file(const std::string& path, const std::string& data) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!f) throw IoError("write failure: " + path);
}

}  // namespace detail

inline void write_sgrm(const Spectrogram& s, const std::string& path) {
  validate(s, "write_sgrm");
  std::string buf;
  buf.reserve(16 + static_cast<std::size_t>(s.values.size()) * 4);
  buf.append("SGRM", 4);
  detail::put_u32(buf, static_cast<std::uint32_t>(s.rows()));
  detail::put_u32(buf, static_cast<std::uint32_t>(s.cols()));
  std::uint32_t flags = 0;
  if (s.axes_present) flags |= 1u;
  if (s.scale == ValueScale::GrayscaleNorm) flags |= 2u;
  detail::put_u32(buf, flags);
  for (Eigen::Index r = 0; r < s.rows(); ++r)
    for (Eigen::Index c = 0; c < s.cols(); ++c)
      detail::put_f32(buf, static_cast<float>(s.values(r, c)));
  if (s.axes_present) {
    for (double v : s.freq_axis_hz) detail::put_f32(buf, static_cast<float>(v));
    for (double v : s.time_axis_s) detail::put_f32(buf, static_cast<float>(v));
  }
  detail::write_file(path, buf);
}

inline Spectrogram read_sgrm(const std::string& path) {
  const std::string data = detail::read_file(path);
  detail::ByteReader rd(data, path);
  rd.magic("SGRM");
  const std::uint32_t rows = rd.u32();
  const std::uint32_t cols = rd.u32();
  const std::uint32_t flags = rd.u32();
  if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20))
    throw FormatError(path + ": implausible dimensions " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " at byte 4");
  Spectrogram s;
  s.values.resize(rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c) s.values(r, c) = rd.f32();
  s.axes_present = (flags & 1u) != 0;
  s.scale = (flags & 2u) != 0 ? ValueScale::GrayscaleNorm : ValueScale::LinearPower;
  if (s.axes_present) {
    s.freq_axis_hz.resize(rows);
    for (auto& v : s.freq_axis_hz) v = rd.f32();
    s.time_axis_s.resize(cols);
    for (auto& v : s.time_axis_s) v = rd.f32();
  } else {
    // Index axes keep the invariants; consumers needing physical units
    // must supply a fallback convention.
    s.freq_axis_hz.resize(rows);
    for (std::uint32_t r = 0; r < rows; ++r) s.freq_axis_hz[r] = static_cast<double>(r);
    s.time_axis_s.resize(cols);
    for (std::uint32_t c = 0; c < cols; ++c) s.time_axis_s[c] = static_cast<double>(c);
  }
  validate(s, ("read_sgrm(" + path + ")").c_str());
  return s;
}

inline void write_sgts(const TimeSeries& ts, const std::string& path) {
  validate(ts, "write_sgts");
  std::string buf;
  buf.reserve(16 + ts.samples.size() * 8);
  buf.append("SGTS", 4);
  detail::put_u32(buf, static_cast<std::uint32_t>(ts.samples.size()));
  detail::put_f64(buf, ts.sample_rate_hz);
  for (const auto& z : ts.samples) {
    detail::put_f32(buf, static_cast<float>(z.real()));
    detail::put_f32(buf, static_cast<float>(z.imag()));
  }
  detail::write_file(path, buf);
}

inline TimeSeries read_sgts(const std::string& path) {
  const std::string data = detail::read_file(path);
  detail::ByteReader rd(data, path);
  rd.magic("SGTS");
  const std::uint32_t n = rd.u32();
  TimeSeries ts;
  ts.sample_rate_hz = rd.f64();
  if (n == 0) throw FormatError(path + ": zero-length series at byte 4");
  if (!(ts.sample_rate_hz > 0.0)) throw FormatError(path + ": non-positive sample rate at byte 8");
  ts.samples.resize(n);
  for (auto& z : ts.samples) {
    const double re = rd.f32();
    const double im = rd.f32();
    z = {re, im};
  }
  return ts;
}

}  // namespace udsift
