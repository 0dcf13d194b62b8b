#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttsim/measures.hpp"

namespace ttsim {

// Text scenario format, one `key = value` per line, `#` starts a comment. The first entry must be
// `format = ttsim-scenario/1`. See README for the full key list.
inline constexpr std::string_view kScenarioFormat = "ttsim-scenario/1";

struct UniverseSpec {
  enum class Kind { Explicit, Uniform, Zipf, Dirichlet };
  Kind kind = Kind::Uniform;
  std::size_t n = 0;
  double exponent = 1.0;
  double concentration = 1.0;
  std::uint64_t seed = 0;
  std::vector<std::string> ids;  // explicit only (optional; defaults to y0, y1, ...)
  std::vector<double> probs;     // explicit only
};

struct GroundTruthSpec {
  std::vector<std::string> members;
  std::optional<double> target_mass;  // greedy fill by descending probability
  std::optional<std::size_t> top;     // the `top` most probable atoms
};

struct VerifierSpec {
  std::optional<std::vector<std::string>> members;  // explicit S-hat
  double target_j = 0.0;
  double target_s_ver = 0.0;
  double tol = 0.02;
};

struct ScenarioFile {
  std::string name = "scenario";
  UniverseSpec universe;
  GroundTruthSpec s_star;
  VerifierSpec verifier;
  std::size_t episodes = 5000;
  std::uint64_t seed = 20240611;
  std::string source;  // original text, kept verbatim for manifests
  std::map<std::string, std::size_t> key_lines;  // where each key was set, for error messages
};

ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario_file(const std::string& path);

struct Scenario {
  std::string name;
  ResponseUniverse universe;
  VerifierSet s_star;
  VerifierSet s_hat;
  RocProfile roc;
  std::size_t episodes;
  std::uint64_t seed;
  std::string source;
};

Scenario build_scenario(const ScenarioFile& file);

struct BundledScenario {
  std::string_view name;
  std::string_view text;
};

// Desk-scale scenarios used by `verify` and as CLI defaults.
const std::vector<BundledScenario>& bundled_scenarios();
std::optional<std::string_view> bundled_scenario_text(std::string_view name);
inline constexpr std::string_view kDefaultScenarioName = "zipf-64";

}  // namespace ttsim
