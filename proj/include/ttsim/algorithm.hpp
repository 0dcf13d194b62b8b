#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ttsim {

enum class Algorithm { AiC, SRS, SMC, BoN, BRS };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::AiC, Algorithm::SRS, Algorithm::SMC, Algorithm::BoN,
                                               Algorithm::BRS};

std::string to_string(Algorithm a);
// Case-insensitive; accepts "aic", "srs", "smc", "bon", "brs".
std::optional<Algorithm> parse_algorithm(std::string_view name);

inline bool is_batched(Algorithm a) noexcept { return a == Algorithm::BoN || a == Algorithm::BRS; }

}  // namespace ttsim
