#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ttsim/algorithm.hpp"
#include "ttsim/measures.hpp"
#include "ttsim/rng.hpp"
#include "ttsim/transport.hpp"

namespace ttsim {

// Which candidates BoN inspects for verified responses.
//   AllResponses: all N+1 (consistent with the RN-derivative lemma; the default)
//   FirstN:       only the first N, falling back to a uniform pick among all N+1
enum class BonInspection { AllResponses, FirstN };

inline constexpr std::uint64_t kDefaultMaxDraws = 1'000'000;

class SamplerConfig {
 public:
  // beta is not used by AiC or BoN to sample; it fixes the skyline their sub-optimality is measured against.
  static SamplerConfig aic(CoverageBudget beta = CoverageBudget(1.0), std::uint64_t max_draws = kDefaultMaxDraws);
  static SamplerConfig srs(CoverageBudget beta, std::optional<double> s_override = std::nullopt,
                           std::uint64_t max_draws = kDefaultMaxDraws);
  static SamplerConfig smc(CoverageBudget beta, std::optional<double> s_override = std::nullopt,
                           std::uint64_t max_draws = kDefaultMaxDraws);
  static SamplerConfig bon(CoverageBudget beta, std::int64_t batch_n,
                           BonInspection inspection = BonInspection::AllResponses);
  static SamplerConfig brs(CoverageBudget beta, std::int64_t batch_n, std::optional<double> s_override = std::nullopt);

  // Generic entry point used by sweeps. Validates the same invariants as the named factories.
  static SamplerConfig make(Algorithm algorithm, CoverageBudget beta, std::optional<std::int64_t> batch_n,
                            std::optional<double> s_override, std::uint64_t max_draws = kDefaultMaxDraws,
                            BonInspection inspection = BonInspection::AllResponses);

  Algorithm algorithm() const noexcept { return algorithm_; }
  CoverageBudget beta() const noexcept { return beta_; }
  std::optional<std::int64_t> batch_n() const noexcept { return batch_n_; }
  std::optional<double> s_override() const noexcept { return s_override_; }
  std::uint64_t max_draws() const noexcept { return max_draws_; }
  BonInspection inspection() const noexcept { return inspection_; }

  // Mass plugged into eta-hat and M: the override when given, otherwise mass(S-hat).
  double effective_s(const VerifierSet& s_hat) const;

 private:
  SamplerConfig(Algorithm a, CoverageBudget beta) : algorithm_(a), beta_(beta) {}

  Algorithm algorithm_;
  CoverageBudget beta_;
  std::optional<std::int64_t> batch_n_;
  std::optional<double> s_override_;
  std::uint64_t max_draws_ = kDefaultMaxDraws;
  BonInspection inspection_ = BonInspection::AllResponses;
};

enum class AcceptPath { VerifiedCorrect, CouplingAccept, RsAccept, Fallback };

const char* to_string(AcceptPath p) noexcept;

struct EpisodeRecord {
  std::size_t chosen_index = 0;
  std::uint64_t proposals_used = 0;
  AcceptPath accept_path = AcceptPath::VerifiedCorrect;
  bool hit_ground_truth = false;  // filled by run_episode, which is the only place S* is known
};

EpisodeRecord run_aic(const ResponseUniverse& u, const VerifierSet& s_hat, const DrawStream& rng,
                      std::uint64_t max_draws = kDefaultMaxDraws);
EpisodeRecord run_srs(const ResponseUniverse& u, const VerifierSet& s_hat, CoverageBudget beta, const DrawStream& rng,
                      std::uint64_t max_draws = kDefaultMaxDraws, std::optional<double> s_override = std::nullopt);
EpisodeRecord run_smc(const ResponseUniverse& u, const VerifierSet& s_hat, CoverageBudget beta, const DrawStream& rng,
                      std::uint64_t max_draws = kDefaultMaxDraws, std::optional<double> s_override = std::nullopt);
EpisodeRecord run_bon(const ResponseUniverse& u, const VerifierSet& s_hat, std::int64_t batch_n, const DrawStream& rng,
                      BonInspection inspection = BonInspection::AllResponses);
EpisodeRecord run_brs(const ResponseUniverse& u, const VerifierSet& s_hat, CoverageBudget beta, std::int64_t batch_n,
                      const DrawStream& rng, std::optional<double> s_override = std::nullopt);

EpisodeRecord run_episode(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                          const VerifierSet& s_hat, const DrawStream& rng);

// Per-atom distribution of the returned response, computed in closed form without randomness.
std::vector<double> exact_induced_distribution(const SamplerConfig& config, const ResponseUniverse& u,
                                               const VerifierSet& s_hat);

double exact_expected_proposals(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_hat);

}  // namespace ttsim
