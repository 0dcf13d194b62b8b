#include "ttsim/algorithm.hpp"

#include <algorithm>
#include <cctype>

namespace ttsim {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::AiC: return "AiC";
    case Algorithm::SRS: return "SRS";
    case Algorithm::SMC: return "SMC";
    case Algorithm::BoN: return "BoN";
    case Algorithm::BRS: return "BRS";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Algorithm a : kAllAlgorithms) {
    std::string candidate = to_string(a);
    std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (candidate == lower) return a;
  }
  return std::nullopt;
}

}  // namespace ttsim
