#include "ttsim/manifest.hpp"

#include "json.hpp"
#include "ttsim/errors.hpp"

#ifndef TTSIM_VERSION
#define TTSIM_VERSION "dev"
#endif

namespace ttsim {

const char* tool_version() noexcept { return TTSIM_VERSION; }

std::string to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["format"] = kManifestFormat;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  // 64-bit seeds are stored as strings: many JSON readers lose precision above 2^53.
  j["seed"] = std::to_string(m.seed);
  j["scenario_path"] = m.scenario_path;
  j["scenario_text"] = m.scenario_text;
  j["args"] = m.args;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

RunManifest parse_manifest(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kManifestFormat)
      throw Error(ErrorKind::Parse, "unsupported manifest format '" + j.at("format").get<std::string>() + "'");
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = std::stoull(j.at("seed").get<std::string>());
    m.scenario_path = j.at("scenario_path").get<std::string>();
    m.scenario_text = j.at("scenario_text").get<std::string>();
    m.args = j.at("args").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("manifest is missing a field: ") + e.what());
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Parse, "manifest seed is not an unsigned integer");
  }
}

}  // namespace ttsim
