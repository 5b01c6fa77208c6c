#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "archsmell/errors.hpp"

namespace archsmell {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// write-temp-then-rename so readers never observe partial artifacts
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? "."
                                          : path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw ValidationError("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

/// Reproducibility record written next to every primary artifact:
/// command, input paths, resolved settings, tool version, and the
/// documented methodological deviations that apply to the command.
struct RunMeta {
  std::string command;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> settings;
  std::vector<std::string> deviations;
};

inline constexpr const char* kToolVersion = "0.1.0";

inline void write_run_meta(const std::filesystem::path& artifact,
                           const RunMeta& meta) {
  nlohmann::ordered_json doc;
  doc["tool"] = "archsmell";
  doc["toolVersion"] = kToolVersion;
  doc["command"] = meta.command;
  nlohmann::ordered_json inputs;
  for (const auto& [k, v] : meta.inputs) inputs[k] = v;
  doc["inputs"] = std::move(inputs);
  nlohmann::ordered_json settings;
  for (const auto& [k, v] : meta.settings) settings[k] = v;
  doc["settings"] = std::move(settings);
  doc["deviations"] = meta.deviations;
  write_file_atomic(artifact.string() + ".meta.json", doc.dump(2) + "\n");
}

}  // namespace archsmell
