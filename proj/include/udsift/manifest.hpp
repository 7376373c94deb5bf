#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "udsift/errors.hpp"

namespace udsift {

/// One dataset sample: a signature file plus label and provenance.
/// Rule verdicts are attached after kinematic checking, when available.
struct SignatureRecord {
  std::string path;  // relative to the manifest file
  std::string class_label;
  double angle_deg = 0.0;
  std::string origin = "synthetic";  // "real" | "synthetic" | "defect"
  std::map<std::string, std::string> verdicts;  // e.g. {"rule1":"pass", ...}
};

struct Manifest {
  std::filesystem::path dir;  // directory the manifest lives in
  std::vector<SignatureRecord> records;

  std::string resolve(const SignatureRecord& rec) const { return (dir / rec.path).string(); }
};

inline Manifest read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest: " + path);
  Manifest m;
  m.dir = std::filesystem::path(path).parent_path();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": invalid JSON (" + e.what() + ")");
    }
    SignatureRecord rec;
    try {
      rec.path = j.at("path").get<std::string>();
      rec.class_label = j.at("class").get<std::string>();
      rec.angle_deg = j.at("angle_deg").get<double>();
      rec.origin = j.at("origin").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": missing field (" + e.what() + ")");
    }
    if (j.contains("verdicts"))
      for (const auto& [k, v] : j.at("verdicts").items())
        rec.verdicts[k] = v.get<std::string>();
    m.records.push_back(std::move(rec));
  }
  return m;
}

inline void write_manifest(const Manifest& m, const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open manifest for writing: " + path);
  for (const auto& rec : m.records) {
    nlohmann::json j;
    j["path"] = rec.path;
    j["class"] = rec.class_label;
    j["angle_deg"] = rec.angle_deg;
    j["origin"] = rec.origin;
    if (!rec.verdicts.empty()) {
      nlohmann::json v;
      for (const auto& [k, val] : rec.verdicts) v[k] = val;
      j["verdicts"] = v;
    }
    f << j.dump() << "\n";
  }
  if (!f) throw IoError("write failure: " + path);
}

/// Records grouped by class label, classes in lexicographic order.
inline std::map<std::string, std::vector<const SignatureRecord*>> by_class(const Manifest& m) {
  std::map<std::string, std::vector<const SignatureRecord*>> out;
  for (const auto& rec : m.records) out[rec.class_label].push_back(&rec);
  return out;
}

}  // namespace udsift
