#pragma once

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "udsift/sgrm.hpp"
#include "udsift/types.hpp"

namespace udsift {

// Minimal 8-bit single-channel PNG codec for interchange with external
// generators. Writing always emits non-interlaced grayscale with filter 0;
// reading accepts only 8-bit grayscale (color or indexed files are rejected,
// as the interchange contract is single-channel).

namespace detail {

inline std::uint32_t crc32_of(const std::string& tag, const std::string& payload) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(tag.data()), static_cast<uInt>(tag.size()));
  crc = crc32(crc, reinterpret_cast<const Bytef*>(payload.data()),
              static_cast<uInt>(payload.size()));
  return static_cast<std::uint32_t>(crc);
}

inline void put_u32_be(std::string& buf, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void png_chunk(std::string& out, const std::string& tag, const std::string& payload) {
  put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  out += tag;
  out += payload;
  put_u32_be(out, crc32_of(tag, payload));
}

inline std::string zlib_deflate(const std::string& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::string out(bound, '\0');
  const int rc = compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                           reinterpret_cast<const Bytef*>(raw.data()),
                           static_cast<uLong>(raw.size()), 6);
  if (rc != Z_OK) throw IoError("png: deflate failed");
  out.resize(bound);
  return out;
}

inline std::string zlib_inflate(const std::string& comp, std::size_t expected) {
  std::string out(expected, '\0');
  uLongf len = static_cast<uLongf>(expected);
  const int rc = uncompress(reinterpret_cast<Bytef*>(out.data()), &len,
                            reinterpret_cast<const Bytef*>(comp.data()),
                            static_cast<uLong>(comp.size()));
  if (rc != Z_OK || len != expected) throw FormatError("png: corrupt compressed image data");
  return out;
}

}  // namespace detail

/// Write a [0,1] grayscale image (any ValueScale) as an 8-bit PNG.
inline void write_png_gray(const Spectrogram& s, const std::string& path) {
  validate(s, "write_png_gray");
  if (s.values.maxCoeff() > 1.0 + 1e-9)
    throw ParameterError("write_png_gray: values must lie in [0,1]");
  const Eigen::Index rows = s.rows(), cols = s.cols();

  std::string raw;
  raw.reserve(static_cast<std::size_t>(rows) * (static_cast<std::size_t>(cols) + 1));
  for (Eigen::Index r = 0; r < rows; ++r) {
    raw.push_back('\0');  // filter type 0
    for (Eigen::Index c = 0; c < cols; ++c) {
      // PNG rows run top-down; row 0 of the image is the most negative
      // frequency, drawn at the bottom.
      const double v = s.values(rows - 1 - r, c);
      const int byte = static_cast<int>(std::lround(std::min(1.0, std::max(0.0, v)) * 255.0));
      raw.push_back(static_cast<char>(byte));
    }
  }

  std::string ihdr;
  detail::put_u32_be(ihdr, static_cast<std::uint32_t>(cols));
  detail::put_u32_be(ihdr, static_cast<std::uint32_t>(rows));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(0);   // color type: grayscale
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter method
  ihdr.push_back(0);   // no interlace

  std::string out("\x89PNG\r\n\x1a\n", 8);
  detail::png_chunk(out, "IHDR", ihdr);
  detail::png_chunk(out, "IDAT", detail::zlib_deflate(raw));
  detail::png_chunk(out, "IEND", "");
  detail::write_file(path, out);
}

/// Read an 8-bit grayscale PNG into a [0,1] grayscale spectrogram with index
/// axes (axes_present = false).
inline Spectrogram read_png_gray(const std::string& path) {
  const std::string data = detail::read_file(path);
  if (data.size() < 8 || data.compare(0, 8, "\x89PNG\r\n\x1a\n", 8) != 0)
    throw FormatError(path + ": bad PNG signature at byte 0");

  std::uint32_t width = 0, height = 0;
  int bit_depth = -1, color_type = -1, interlace = -1;
  std::string idat;
  std::size_t pos = 8;
  auto u32_be = [&](std::size_t at) -> std::uint32_t {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v = (v << 8) | static_cast<unsigned char>(data[at + static_cast<std::size_t>(i)]);
    return v;
  };
  while (pos + 8 <= data.size()) {
    const std::uint32_t len = u32_be(pos);
    const std::string tag = data.substr(pos + 4, 4);
    if (pos + 12 + len > data.size())
      throw FormatError(path + ": truncated chunk at byte " + std::to_string(pos));
    const std::string payload = data.substr(pos + 8, len);
    if (tag == "IHDR") {
      if (len != 13) throw FormatError(path + ": bad IHDR length at byte " + std::to_string(pos));
      width = u32_be(pos + 8);
      height = u32_be(pos + 12);
      bit_depth = static_cast<unsigned char>(payload[8]);
      color_type = static_cast<unsigned char>(payload[9]);
      interlace = static_cast<unsigned char>(payload[12]);
    } else if (tag == "IDAT") {
      idat += payload;
    } else if (tag == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (width == 0 || height == 0) throw FormatError(path + ": missing IHDR");
  if (color_type != 0)
    throw FormatError(path + ": unsupported color type " + std::to_string(color_type) +
                      " (need single-channel grayscale)");
  if (bit_depth != 8)
    throw FormatError(path + ": unsupported bit depth " + std::to_string(bit_depth));
  if (interlace != 0) throw FormatError(path + ": interlaced PNG not supported");

  const std::size_t stride = static_cast<std::size_t>(width) + 1;
  const std::string raw = detail::zlib_inflate(idat, stride * height);

  // Undo per-row filters (types 0-4 for grayscale: bpp = 1).
  std::vector<std::vector<unsigned char>> rows(height, std::vector<unsigned char>(width));
  for (std::uint32_t r = 0; r < height; ++r) {
    const unsigned char filter = static_cast<unsigned char>(raw[r * stride]);
    for (std::uint32_t c = 0; c < width; ++c) {
      const int x = static_cast<unsigned char>(raw[r * stride + 1 + c]);
      const int a = c > 0 ? rows[r][c - 1] : 0;
      const int b = r > 0 ? rows[r - 1][c] : 0;
      const int cc = (r > 0 && c > 0) ? rows[r - 1][c - 1] : 0;
      int v = 0;
      switch (filter) {
        case 0: v = x; break;
        case 1: v = x + a; break;
        case 2: v = x + b; break;
        case 3: v = x + (a + b) / 2; break;
        case 4: {
          const int p = a + b - cc;
          const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - cc);
          const int pred = (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : cc);
          v = x + pred;
          break;
        }
        default:
          throw FormatError(path + ": unknown filter type " + std::to_string(filter) + " in row " +
                            std::to_string(r));
      }
      rows[r][c] = static_cast<unsigned char>(v & 0xFF);
    }
  }

  Spectrogram s;
  s.values.resize(height, width);
  for (std::uint32_t r = 0; r < height; ++r)
    for (std::uint32_t c = 0; c < width; ++c)
      s.values(static_cast<Eigen::Index>(height - 1 - r), c) =
          static_cast<double>(rows[r][c]) / 255.0;
  s.freq_axis_hz.resize(height);
  for (std::uint32_t r = 0; r < height; ++r) s.freq_axis_hz[r] = static_cast<double>(r);
  s.time_axis_s.resize(width);
  for (std::uint32_t c = 0; c < width; ++c) s.time_axis_s[c] = static_cast<double>(c);
  s.scale = ValueScale::GrayscaleNorm;
  s.axes_present = false;
  return s;
}

/// Dispatch on extension: .sgrm or .png.
inline Spectrogram read_signature(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0)
    return read_png_gray(path);
  return read_sgrm(path);
}

inline void write_signature(const Spectrogram& s, const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0)
    write_png_gray(s, path);
  else
    write_sgrm(s, path);
}

}  // namespace udsift
