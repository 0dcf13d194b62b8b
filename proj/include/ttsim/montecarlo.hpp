#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ttsim/measures.hpp"
#include "ttsim/samplers.hpp"
#include "ttsim/theory.hpp"

namespace ttsim {

inline constexpr std::size_t kDefaultEpisodes = 5000;

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct ZScores {
  double subopt = 0.0;
  std::optional<double> proposals;
};

struct EstimateReport {
  std::size_t episodes = 0;
  Estimate subopt;     // skyline - accuracy
  Estimate proposals;  // mean proposals_used
  double proposals_variance = 0.0;
  double accuracy = 0.0;
  std::uint64_t hits = 0;
  double skyline = 0.0;  // min(1, m_beta(s))

  std::vector<std::uint64_t> histogram;       // chosen-response counts per atom
  std::array<std::uint64_t, 4> path_counts{};  // indexed by AcceptPath
  double empirical_chi2 = 0.0;
  double chi2_bias = 0.0;  // expected upward bias of the histogram chi2

  // Exact oracle counterparts of the empirical values.
  double exact_chi2 = 0.0;
  double exact_accuracy = 0.0;
  double exact_proposals = 0.0;

  TheoryPrediction theory;
  ZScores z;
};

struct EstimateOptions {
  unsigned threads = 1;
  std::size_t grid_index = static_cast<std::size_t>(-1);  // only used to annotate errors
};

// Closed-form prediction for a configuration. Falls back to the exact induced distribution when
// no theorem covers the inputs (s_override active, or degenerate masses).
TheoryPrediction predict(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                         const VerifierSet& s_hat);

// Runs episodes [0, episodes) under master_seed. Output order is episode order regardless of threads.
std::vector<EpisodeRecord> run_episodes(const SamplerConfig& config, const ResponseUniverse& u,
                                        const VerifierSet& s_star, const VerifierSet& s_hat, std::size_t episodes,
                                        std::uint64_t master_seed, const EstimateOptions& options = {});

EstimateReport summarize(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                         const VerifierSet& s_hat, const std::vector<EpisodeRecord>& records);

EstimateReport estimate(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                        const VerifierSet& s_hat, std::size_t episodes, std::uint64_t master_seed,
                        const EstimateOptions& options = {});

// One report per config; config i runs under derive_seed(master_seed, i).
std::vector<EstimateReport> sweep(const std::vector<SamplerConfig>& configs, const ResponseUniverse& u,
                                  const VerifierSet& s_star, const VerifierSet& s_hat, std::size_t episodes,
                                  std::uint64_t master_seed, const EstimateOptions& options = {});

// (a - b) / se, with se == 0 treated as exact agreement when |a - b| <= 1e-12.
double z_score(double empirical, double theory, double se) noexcept;

// Two independent estimates: (a - b) / sqrt(se_a^2 + se_b^2).
double pooled_z(const Estimate& a, const Estimate& b) noexcept;

}  // namespace ttsim
