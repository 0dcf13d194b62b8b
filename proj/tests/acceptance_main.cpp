// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "ttsim/verify/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ttsim acceptance suite"};
  std::vector<int> ids;
  ttsim::acceptance::Options opts;
  app.add_option("--criterion", ids, "criteria to run (default all)")->check(CLI::Range(1, ttsim::acceptance::kCriterionCount));
  app.add_option("--episodes", opts.episodes, "episodes for the statistical criteria");
  app.add_option("--seed", opts.seed, "master seed");
  app.add_option("--threads", opts.threads, "worker threads");
  CLI11_PARSE(app, argc, argv);

  if (ids.empty())
    for (int i = 1; i <= ttsim::acceptance::kCriterionCount; ++i) ids.push_back(i);
  bool ok = true;
  for (int id : ids) {
    const auto r = ttsim::acceptance::run_criterion(id, opts);
    std::cout << ttsim::acceptance::format(r) << std::endl;
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
