#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "udsift/manifest.hpp"
#include "udsift/png_gray.hpp"
#include "udsift/sgrm.hpp"
#include "support/testutil.hpp"

using namespace udsift;

TEST_CASE("sgrm file size is 16 + rows*cols*4 bytes without axes") {
  testutil::TempDir tmp("sgrm_size");
  auto s = testutil::random_gray(100, 100, 1);
  s.axes_present = false;
  const auto path = tmp.file("a.sgrm");
  write_sgrm(s, path);
  CHECK(std::filesystem::file_size(path) == 16u + 100u * 100u * 4u);
}

TEST_CASE("sgrm round-trips f32 values and axes exactly") {
  testutil::TempDir tmp("sgrm_rt");
  auto s = testutil::random_gray(31, 17, 2);
  // store f32-representable values so the round trip is exact
  for (Eigen::Index r = 0; r < s.values.rows(); ++r)
    for (Eigen::Index c = 0; c < s.values.cols(); ++c)
      s.values(r, c) = static_cast<double>(static_cast<float>(s.values(r, c)));
  for (auto& v : s.freq_axis_hz) v = static_cast<double>(static_cast<float>(v));
  for (auto& v : s.time_axis_s) v = static_cast<double>(static_cast<float>(v));
  const auto path = tmp.file("b.sgrm");
  write_sgrm(s, path);
  const auto r = read_sgrm(path);
  CHECK(r.values == s.values);
  CHECK(r.freq_axis_hz == s.freq_axis_hz);
  CHECK(r.time_axis_s == s.time_axis_s);
  CHECK(r.scale == s.scale);

  // a second write of the read-back value is byte-identical
  const auto path2 = tmp.file("c.sgrm");
  write_sgrm(r, path2);
  CHECK(detail::read_file(path) == detail::read_file(path2));
}

TEST_CASE("sgrm rejects bad magic with a byte offset") {
  testutil::TempDir tmp("sgrm_bad");
  const auto path = tmp.file("bad.sgrm");
  detail::write_file(path, "NOPE00000000000000000000");
  try {
    read_sgrm(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("byte 0") != std::string::npos);
  }
}

TEST_CASE("sgrm rejects truncated payloads") {
  testutil::TempDir tmp("sgrm_trunc");
  auto s = testutil::random_gray(8, 8, 3);
  const auto path = tmp.file("t.sgrm");
  write_sgrm(s, path);
  auto bytes = detail::read_file(path);
  bytes.resize(bytes.size() / 2);
  detail::write_file(path, bytes);
  CHECK_THROWS_AS(read_sgrm(path), FormatError);
}

TEST_CASE("png round-trip stays within 1/255 per pixel") {
  testutil::TempDir tmp("png_rt");
  const auto s = testutil::random_gray(64, 48, 4);
  const auto path = tmp.file("img.png");
  write_png_gray(s, path);
  const auto r = read_png_gray(path);
  REQUIRE(r.values.rows() == s.values.rows());
  REQUIRE(r.values.cols() == s.values.cols());
  CHECK((r.values - s.values).cwiseAbs().maxCoeff() <= 1.0 / 255.0 + 1e-12);
  CHECK(r.scale == ValueScale::GrayscaleNorm);
  CHECK_FALSE(r.axes_present);
  // quantized values round-trip exactly through a second write/read
  const auto path2 = tmp.file("img2.png");
  write_png_gray(r, path2);
  const auto r2 = read_png_gray(path2);
  CHECK(r2.values == r.values);
}

TEST_CASE("png reader rejects non-grayscale files") {
  testutil::TempDir tmp("png_rgb");
  // hand-assemble a tiny 1x1 RGB PNG (color type 2)
  std::string ihdr;
  udsift::detail::put_u32_be(ihdr, 1);
  udsift::detail::put_u32_be(ihdr, 1);
  ihdr.push_back(8);
  ihdr.push_back(2);  // truecolor
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  std::string raw("\x00\x10\x20\x30", 4);
  std::string out("\x89PNG\r\n\x1a\n", 8);
  udsift::detail::png_chunk(out, "IHDR", ihdr);
  udsift::detail::png_chunk(out, "IDAT", udsift::detail::zlib_deflate(raw));
  udsift::detail::png_chunk(out, "IEND", "");
  const auto path = tmp.file("rgb.png");
  udsift::detail::write_file(path, out);
  try {
    read_png_gray(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("color type") != std::string::npos);
  }
}

TEST_CASE("read_signature dispatches on extension") {
  testutil::TempDir tmp("dispatch");
  const auto s = testutil::random_gray(32, 32, 5);
  write_signature(s, tmp.file("x.sgrm"));
  write_signature(s, tmp.file("x.png"));
  CHECK(read_signature(tmp.file("x.sgrm")).axes_present);
  CHECK_FALSE(read_signature(tmp.file("x.png")).axes_present);
}

TEST_CASE("manifest JSONL round-trip with verdicts") {
  testutil::TempDir tmp("manifest");
  Manifest m;
  m.dir = tmp.path();
  SignatureRecord a{"walking/w0.sgrm", "walking", 30.0, "real", {{"rule1", "pass"}}};
  SignatureRecord b{"falling/f0.sgrm", "falling", 0.0, "defect", {}};
  m.records = {a, b};
  const auto path = tmp.file("manifest.jsonl");
  write_manifest(m, path);
  const auto r = read_manifest(path);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].path == a.path);
  CHECK(r.records[0].class_label == "walking");
  CHECK(r.records[0].angle_deg == 30.0);
  CHECK(r.records[0].origin == "real");
  CHECK(r.records[0].verdicts.at("rule1") == "pass");
  CHECK(r.records[1].origin == "defect");
  CHECK(r.resolve(r.records[1]) == (tmp.path() / "falling/f0.sgrm").string());

  // rewrite is byte-identical (stable key order)
  const auto path2 = tmp.file("manifest2.jsonl");
  write_manifest(r, path2);
  CHECK(detail::read_file(path) == detail::read_file(path2));
}

TEST_CASE("manifest reader reports the offending line") {
  testutil::TempDir tmp("manifest_bad");
  const auto path = tmp.file("m.jsonl");
  detail::write_file(path, "{\"path\":\"a\",\"class\":\"walking\",\"angle_deg\":0,\"origin\":\"real\"}\nnot json\n");
  try {
    read_manifest(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}
