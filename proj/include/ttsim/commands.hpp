#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttsim/algorithm.hpp"
#include "ttsim/manifest.hpp"
#include "ttsim/samplers.hpp"
#include "ttsim/scenario.hpp"
#include "ttsim/theory.hpp"

namespace ttsim {

struct RunSettings {
  std::size_t episodes = 5000;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // never changes output, only wall time
  bool render_svg = false;
};

struct SweepBetaOptions {
  RunSettings run;
  std::vector<Algorithm> algorithms{Algorithm::AiC, Algorithm::SRS, Algorithm::SMC};
  std::vector<double> betas;  // empty: auto grid (12 points per regime)
};

struct SweepBatchOptions {
  RunSettings run;
  std::vector<Algorithm> algorithms{Algorithm::BoN, Algorithm::BRS};
  std::vector<std::int64_t> ns{0, 1, 2, 3, 4, 5};
  double beta = 1.5;
  bool allow_undetermined = false;
  BonBatchRule bon_rule = BonBatchRule::Literal;
  BonInspection bon_inspection = BonInspection::AllResponses;
};

struct AblateOptions {
  RunSettings run;
  std::vector<double> s_values;  // empty: multiples of mass(S-hat) plus 1.0
  double beta = 1.5;
};

struct CommandOutput {
  std::string csv;
  std::optional<std::string> svg;
};

CommandOutput sweep_beta(const Scenario& scenario, const SweepBetaOptions& options);
CommandOutput sweep_batch(const Scenario& scenario, const SweepBatchOptions& options);
CommandOutput ablate_s(const Scenario& scenario, const AblateOptions& options);

// Human-readable summary of a scenario: masses, ROC, regime boundaries, admissible batch sizes.
std::string describe(const Scenario& scenario, double beta);

// String-keyed dispatch shared by the CLI and manifest replay. Keys mirror the long flag names
// ("episodes", "seed", "algorithms", "beta-grid", "n-grid", "s-grid", "beta", ...). Missing keys
// take the defaults above; episodes/seed default to the scenario's own values. "threads" is accepted
// but never recorded, since it cannot change the output.
using ArgMap = std::map<std::string, std::string>;
CommandOutput run_command(const std::string& command, const ArgMap& args, const std::string& scenario_text);

// Fills in every defaulted key so the manifest pins the run completely.
ArgMap normalize_args(const std::string& command, const ArgMap& args, const Scenario& scenario);

RunManifest make_manifest(const std::string& command, const ArgMap& normalized, const std::string& scenario_path,
                          const std::string& scenario_text, std::vector<std::string> outputs);

// Re-executes the manifest. Output is byte-identical to the original run.
CommandOutput replay(const RunManifest& manifest);

std::vector<Algorithm> parse_algorithm_list(const std::string& text);
std::string format_algorithm_list(const std::vector<Algorithm>& algorithms);

}  // namespace ttsim
