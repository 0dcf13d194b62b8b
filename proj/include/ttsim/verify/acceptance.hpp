#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ttsim/transport.hpp"

namespace ttsim::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

using OtcFunction = std::function<double(double, CoverageBudget)>;

struct Options {
  std::size_t episodes = 5000;
  std::uint64_t seed = 20240611;
  unsigned threads = 1;
  // Hook for mutation smoke tests: the transport cost under test in the OTC = TV criterion.
  OtcFunction otc_under_test = [](double s, CoverageBudget b) { return otc(s, b); };
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, const Options& options);
std::vector<CriterionResult> run_all(const Options& options);

// "PASS [ 2] OTC equals total variation (0.01 s / 1 s) -- detail"
std::string format(const CriterionResult& result);

}  // namespace ttsim::acceptance
