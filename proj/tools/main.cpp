// ttsim command-line front end. See README.md for the full flag reference.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ttsim/commands.hpp"
#include "ttsim/errors.hpp"
#include "ttsim/manifest.hpp"
#include "ttsim/scenario.hpp"
#include "ttsim/verify/acceptance.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct ScenarioSource {
  std::string file;
  std::string bundled;

  std::string path() const { return file.empty() ? "bundled:" + name() : file; }
  std::string name() const { return bundled.empty() ? std::string(ttsim::kDefaultScenarioName) : bundled; }

  std::string text() const {
    if (!file.empty()) return read_file(file);
    const auto t = ttsim::bundled_scenario_text(name());
    if (!t) throw ttsim::Error(ttsim::ErrorKind::Usage, "no bundled scenario named '" + name() + "' (try `ttsim scenarios`)");
    return std::string(*t);
  }

  static std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ttsim::Error(ttsim::ErrorKind::Usage, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw ttsim::Error(ttsim::ErrorKind::Usage, "cannot write '" + path + "'");
}

void add_scenario_flags(CLI::App* cmd, ScenarioSource& src) {
  auto* f = cmd->add_option("--scenario", src.file, "scenario file");
  auto* b = cmd->add_option("--bundled", src.bundled, "bundled scenario name (default zipf-64)");
  f->excludes(b);
}

// Options shared by the three sweep commands. Values land in the string map the library expects.
struct SweepFlags {
  ScenarioSource scenario;
  std::string out, svg, manifest;
  unsigned threads = 1;
  bool allow_undetermined = false;
  std::map<std::string, std::string> raw;  // only flags the user actually passed

  CLI::Option* add(CLI::App* cmd, const std::string& key, const std::string& help) {
    return cmd->add_option("--" + key, raw[key], help);
  }

  void attach(CLI::App* cmd) {
    add_scenario_flags(cmd, scenario);
    add(cmd, "episodes", "episodes per grid point (default: scenario value)");
    add(cmd, "seed", "master seed (default: scenario value)");
    cmd->add_option("--out", out, "CSV output path (default: stdout)");
    cmd->add_option("--svg", svg, "also render an SVG chart to this path");
    cmd->add_option("--manifest", manifest, "manifest path (default: <out>.manifest.json)");
    cmd->add_option("--threads", threads, "worker threads; never changes the output")->check(CLI::PositiveNumber);
  }

  ttsim::ArgMap collect(const CLI::App* cmd) const {
    ttsim::ArgMap a;
    for (const auto& [k, v] : raw)
      if (cmd->count("--" + k) > 0) a[k] = v;
    if (!svg.empty()) a["svg"] = "true";
    if (allow_undetermined) a["allow-undetermined"] = "true";
    return a;
  }
};

int run_sweep(const std::string& command, const CLI::App* cmd, const SweepFlags& f) {
  const std::string text = f.scenario.text();
  ttsim::ArgMap args = f.collect(cmd);
  const ttsim::Scenario sc = ttsim::build_scenario(ttsim::parse_scenario(text));
  const ttsim::ArgMap normalized = ttsim::normalize_args(command, args, sc);

  ttsim::ArgMap run_args = normalized;
  run_args["threads"] = std::to_string(f.threads);
  const auto result = ttsim::run_command(command, run_args, text);

  if (f.out.empty()) {
    std::cout << result.csv;
  } else {
    write_file(f.out, result.csv);
  }
  if (!f.svg.empty() && result.svg) write_file(f.svg, *result.svg);

  if (!f.out.empty() || !f.manifest.empty()) {
    std::vector<std::string> outputs;
    if (!f.out.empty()) outputs.push_back(f.out);
    if (!f.svg.empty()) outputs.push_back(f.svg);
    const auto manifest = ttsim::make_manifest(command, normalized, f.scenario.path(), text, outputs);
    write_file(f.manifest.empty() ? f.out + ".manifest.json" : f.manifest, ttsim::to_json(manifest));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ttsim: simulate verifier-guided test-time sampling and check it against closed-form theory"};
  app.set_version_flag("--version", std::string(ttsim::tool_version()));
  app.require_subcommand(1);

  SweepFlags beta_flags, batch_flags, ablate_flags;

  auto* sweep_beta = app.add_subcommand("sweep-beta", "sub-optimality and proposals across a grid of coverage budgets");
  beta_flags.attach(sweep_beta);
  beta_flags.add(sweep_beta, "algorithms", "comma list from AiC,SRS,SMC (default all three)");
  beta_flags.add(sweep_beta, "beta-grid", "comma list or start:stop:step, or 'auto' (12 points per regime)");

  auto* sweep_batch = app.add_subcommand("sweep-batch", "BoN and BRS across a grid of batch sizes");
  batch_flags.attach(sweep_batch);
  batch_flags.add(sweep_batch, "algorithms", "comma list from BoN,BRS (default both)");
  batch_flags.add(sweep_batch, "n-grid", "batch sizes N, comma list or start:stop:step (default 0:5:1)");
  batch_flags.add(sweep_batch, "beta", "coverage budget (default 1.5)");
  batch_flags.add(sweep_batch, "bon-rule", "how BoN admissibility is judged: literal or chi-square");
  batch_flags.add(sweep_batch, "bon-inspect", "which BoN candidates are checked: all or first-n");
  sweep_batch->add_flag("--allow-undetermined", batch_flags.allow_undetermined,
                        "run BoN even when its admissible batch size is undetermined");

  auto* ablate = app.add_subcommand("ablate-s", "accuracy of AiC/SRS/SMC when the sampler assumes a wrong s");
  ablate_flags.attach(ablate);
  ablate_flags.add(ablate, "s-grid", "assumed masses in (0,1], or 'auto'");
  ablate_flags.add(ablate, "beta", "coverage budget (default 1.5)");

  auto* describe = app.add_subcommand("describe", "print masses, ROC and theory values for a scenario");
  ScenarioSource describe_src;
  double describe_beta = 1.5;
  add_scenario_flags(describe, describe_src);
  describe->add_option("--beta", describe_beta, "coverage budget for the theory values");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite and print PASS/FAIL per criterion");
  ttsim::acceptance::Options verify_opts;
  std::vector<int> criteria;
  std::string verify_out;
  verify->add_option("--criterion", criteria, "run only these criteria (1-11)")->check(CLI::Range(1, 11));
  verify->add_option("--episodes", verify_opts.episodes, "episodes for the statistical criteria")
      ->check(CLI::Range(2, 100000000));
  verify->add_option("--seed", verify_opts.seed, "master seed");
  verify->add_option("--threads", verify_opts.threads, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_out, "also write the report to this file");

  auto* replay_cmd = app.add_subcommand("replay", "re-run a manifest");
  std::string manifest_path, replay_out;
  bool replay_check = false;
  replay_cmd->add_option("manifest", manifest_path, "manifest JSON")->required();
  replay_cmd->add_flag("--check", replay_check, "compare against the recorded CSV instead of writing it");
  replay_cmd->add_option("--out", replay_out, "CSV output path (default: stdout)");

  auto* list = app.add_subcommand("scenarios", "list bundled scenarios");
  std::string show;
  list->add_option("--show", show, "print the text of one bundled scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sweep_beta) return run_sweep("sweep-beta", sweep_beta, beta_flags);
    if (*sweep_batch) return run_sweep("sweep-batch", sweep_batch, batch_flags);
    if (*ablate) return run_sweep("ablate-s", ablate, ablate_flags);
    if (*describe) {
      const auto sc = ttsim::build_scenario(ttsim::parse_scenario(describe_src.text()));
      std::cout << ttsim::describe(sc, describe_beta);
      return kOk;
    }
    if (*verify) {
      if (criteria.empty())
        for (int i = 1; i <= ttsim::acceptance::kCriterionCount; ++i) criteria.push_back(i);
      std::ostringstream report;
      bool all = true;
      for (int id : criteria) {
        const auto r = ttsim::acceptance::run_criterion(id, verify_opts);
        const std::string line = ttsim::acceptance::format(r);
        std::cout << line << std::endl;
        report << line << "\n";
        all = all && r.pass;
      }
      if (!verify_out.empty()) write_file(verify_out, report.str());
      return all ? kOk : kFailed;
    }
    if (*replay_cmd) {
      const auto manifest = ttsim::parse_manifest(ScenarioSource::read_file(manifest_path));
      const auto result = ttsim::replay(manifest);
      if (replay_check) {
        if (manifest.outputs.empty())
          throw ttsim::Error(ttsim::ErrorKind::Usage, "manifest records no output to compare against");
        const bool same = ScenarioSource::read_file(manifest.outputs.front()) == result.csv;
        std::cout << (same ? "replay matches " : "replay DIFFERS from ") << manifest.outputs.front() << "\n";
        return same ? kOk : kFailed;
      }
      if (replay_out.empty())
        std::cout << result.csv;
      else
        write_file(replay_out, result.csv);
      return kOk;
    }
    if (*list) {
      if (!show.empty()) {
        const auto t = ttsim::bundled_scenario_text(show);
        if (!t) throw ttsim::Error(ttsim::ErrorKind::Usage, "no bundled scenario named '" + show + "'");
        std::cout << *t;
        return kOk;
      }
      for (const auto& b : ttsim::bundled_scenarios()) std::cout << b.name << "\n";
      return kOk;
    }
  } catch (const ttsim::Error& e) {
    std::cerr << "error (" << ttsim::to_string(e.kind()) << "): " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
