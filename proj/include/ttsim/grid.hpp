#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ttsim {

// "1,1.5,2" or "start:stop:step" (inclusive of stop up to rounding). Throws a usage error otherwise.
std::vector<double> parse_real_grid(std::string_view text);
std::vector<std::int64_t> parse_count_grid(std::string_view text);

// `per_regime` points in each of the three regimes delimited by min/max(1/s, 1/s_ver).
// The transport block starts at beta = 1 and ends on its boundary; the policy-improvement block
// ends on the upper boundary; the saturation block runs up to twice the upper boundary.
std::vector<double> auto_beta_grid(double s, double s_ver, int per_regime = 12);

}  // namespace ttsim
