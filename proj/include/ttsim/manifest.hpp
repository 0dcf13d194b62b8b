#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ttsim {

inline constexpr std::string_view kManifestFormat = "ttsim-manifest/1";

// Everything needed to rerun a command and get the same CSV bytes back.
struct RunManifest {
  std::string command;
  std::string scenario_path;  // informational; the text below is what replay uses
  std::string scenario_text;
  std::map<std::string, std::string> args;  // normalised option values (grids, algorithms, ...)
  std::uint64_t seed = 0;
  std::string tool_version;
  std::vector<std::string> outputs;
};

std::string to_json(const RunManifest& manifest);
RunManifest parse_manifest(std::string_view json_text);

const char* tool_version() noexcept;

}  // namespace ttsim
