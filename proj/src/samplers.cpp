#include "ttsim/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ttsim/errors.hpp"

namespace ttsim {

namespace {

void check_override(const std::optional<double>& s) {
  if (s && !(*s > 0.0 && *s <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "s_override must lie in (0,1], got " + std::to_string(*s));
}

void check_batch(std::int64_t n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "batch size N must be >= 0");
}

void check_max_draws(std::uint64_t m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "max_draws must be >= 1");
}

// The SRS/SMC acceptance inputs: eta-hat on and off the verifier set, and the envelope M.
struct Tilt {
  double on;
  double off;
  double envelope;
};

Tilt tilt_for(const VerifierSet& s_hat, CoverageBudget beta, const std::optional<double>& s_override) {
  const double s = s_override ? *s_override : s_hat.mass();
  if (!(s > 0.0))
    throw Error(ErrorKind::DegenerateSet, "verifier set has no mass; pass s_override to define the tilt");
  const TiltedDensity d = tilted_density(s, beta);
  return {d.on_value, d.off_value, std::max(d.on_value, d.off_value)};
}

// Binomial(n, p) probability of k successes, with the p in {0, 1} corners handled exactly.
double binomial_pmf(std::int64_t n, std::int64_t k, double p) {
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double log_choose = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                            std::lgamma(static_cast<double>(n - k) + 1.0);
  return std::exp(log_choose + static_cast<double>(k) * std::log(p) + static_cast<double>(n - k) * std::log1p(-p));
}

// E[1 / (1 + K)] for K ~ Binomial(n, p).
double mean_inverse_share(std::int64_t n, double p) {
  double acc = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) acc += binomial_pmf(n, k, p) / static_cast<double>(k + 1);
  return acc;
}

double ipow(double base, std::int64_t n) { return std::pow(base, static_cast<double>(n)); }

std::size_t pick(double u, std::size_t count) {
  return std::min(count - 1, static_cast<std::size_t>(u * static_cast<double>(count)));
}

}  // namespace

SamplerConfig SamplerConfig::aic(CoverageBudget beta, std::uint64_t max_draws) {
  check_max_draws(max_draws);
  SamplerConfig c(Algorithm::AiC, beta);
  c.max_draws_ = max_draws;
  return c;
}

SamplerConfig SamplerConfig::srs(CoverageBudget beta, std::optional<double> s_override, std::uint64_t max_draws) {
  check_override(s_override);
  check_max_draws(max_draws);
  SamplerConfig c(Algorithm::SRS, beta);
  c.s_override_ = s_override;
  c.max_draws_ = max_draws;
  return c;
}

SamplerConfig SamplerConfig::smc(CoverageBudget beta, std::optional<double> s_override, std::uint64_t max_draws) {
  SamplerConfig c = srs(beta, s_override, max_draws);
  c.algorithm_ = Algorithm::SMC;
  return c;
}

SamplerConfig SamplerConfig::bon(CoverageBudget beta, std::int64_t batch_n, BonInspection inspection) {
  check_batch(batch_n);
  SamplerConfig c(Algorithm::BoN, beta);
  c.batch_n_ = batch_n;
  c.inspection_ = inspection;
  return c;
}

SamplerConfig SamplerConfig::brs(CoverageBudget beta, std::int64_t batch_n, std::optional<double> s_override) {
  check_batch(batch_n);
  check_override(s_override);
  SamplerConfig c(Algorithm::BRS, beta);
  c.batch_n_ = batch_n;
  c.s_override_ = s_override;
  return c;
}

SamplerConfig SamplerConfig::make(Algorithm algorithm, CoverageBudget beta, std::optional<std::int64_t> batch_n,
                                  std::optional<double> s_override, std::uint64_t max_draws,
                                  BonInspection inspection) {
  if (is_batched(algorithm) != batch_n.has_value())
    throw Error(ErrorKind::InvalidArgument, "batch size is required for BoN/BRS and not allowed otherwise");
  if (s_override && (algorithm == Algorithm::AiC || algorithm == Algorithm::BoN))
    throw Error(ErrorKind::InvalidArgument, to_string(algorithm) + " does not use an assumed s");
  switch (algorithm) {
    case Algorithm::AiC: return aic(beta, max_draws);
    case Algorithm::SRS: return srs(beta, s_override, max_draws);
    case Algorithm::SMC: return smc(beta, s_override, max_draws);
    case Algorithm::BoN: return bon(beta, *batch_n, inspection);
    case Algorithm::BRS: return brs(beta, *batch_n, s_override);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown algorithm");
}

double SamplerConfig::effective_s(const VerifierSet& s_hat) const { return s_override_ ? *s_override_ : s_hat.mass(); }

const char* to_string(AcceptPath p) noexcept {
  switch (p) {
    case AcceptPath::VerifiedCorrect: return "verified-correct";
    case AcceptPath::CouplingAccept: return "coupling-accept";
    case AcceptPath::RsAccept: return "rs-accept";
    case AcceptPath::Fallback: return "fallback";
  }
  return "?";
}

EpisodeRecord run_aic(const ResponseUniverse& u, const VerifierSet& s_hat, const DrawStream& rng,
                      std::uint64_t max_draws) {
  for (std::uint64_t n = 0; n < max_draws; ++n) {
    const std::size_t y = u.sample(rng.draw(n).response);
    if (s_hat.contains(y)) return {y, n + 1, AcceptPath::VerifiedCorrect, false};
  }
  throw BudgetExhaustedError(max_draws);
}

EpisodeRecord run_srs(const ResponseUniverse& u, const VerifierSet& s_hat, CoverageBudget beta, const DrawStream& rng,
                      std::uint64_t max_draws, std::optional<double> s_override) {
  check_override(s_override);
  const Tilt t = tilt_for(s_hat, beta, s_override);
  const double off_accept = t.off / t.envelope;
  for (std::uint64_t n = 0; n < max_draws; ++n) {
    const DrawUniforms d = rng.draw(n);
    const std::size_t y = u.sample(d.response);
    if (s_hat.contains(y)) return {y, n + 1, AcceptPath::VerifiedCorrect, false};
    if (off_accept >= d.accept) return {y, n + 1, AcceptPath::RsAccept, false};
  }
  throw BudgetExhaustedError(max_draws);
}

EpisodeRecord run_smc(const ResponseUniverse& u, const VerifierSet& s_hat, CoverageBudget beta, const DrawStream& rng,
                      std::uint64_t max_draws, std::optional<double> s_override) {
  check_override(s_override);
  const Tilt t = tilt_for(s_hat, beta, s_override);
  const DrawUniforms first = rng.draw(0);
  const std::size_t y0 = u.sample(first.response);
  const double eta = s_hat.contains(y0) ? t.on : t.off;
  if (eta >= first.accept) return {y0, 1, AcceptPath::CouplingAccept, false};
  // Residual draw: mu conditioned on the verifier set, by plain rejection.
  for (std::uint64_t n = 1; n < max_draws; ++n) {
    const std::size_t y = u.sample(rng.draw(n).response);
    if (s_hat.contains(y)) return {y, n + 1, AcceptPath::VerifiedCorrect, false};
  }
  throw BudgetExhaustedError(max_draws);
}

EpisodeRecord run_bon(const ResponseUniverse& u, const VerifierSet& s_hat, std::int64_t batch_n, const DrawStream& rng,
                      BonInspection inspection) {
  check_batch(batch_n);
  const auto total = static_cast<std::size_t>(batch_n) + 1;
  const std::size_t inspected = inspection == BonInspection::AllResponses ? total : total - 1;
  std::vector<std::size_t> batch(total);
  std::vector<std::size_t> verified;
  for (std::size_t i = 0; i < total; ++i) {
    batch[i] = u.sample(rng.draw(i).response);
    if (i < inspected && s_hat.contains(batch[i])) verified.push_back(batch[i]);
  }
  const double u_pick = rng.auxiliary(0);
  if (!verified.empty()) return {verified[pick(u_pick, verified.size())], total, AcceptPath::VerifiedCorrect, false};
  return {batch[pick(u_pick, total)], total, AcceptPath::Fallback, false};
}

EpisodeRecord run_brs(const ResponseUniverse& u, const VerifierSet& s_hat, CoverageBudget beta, std::int64_t batch_n,
                      const DrawStream& rng, std::optional<double> s_override) {
  check_batch(batch_n);
  check_override(s_override);
  const Tilt t = tilt_for(s_hat, beta, s_override);
  const double off_accept = t.off / t.envelope;
  const auto n = static_cast<std::uint64_t>(batch_n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const DrawUniforms d = rng.draw(i);
    const std::size_t y = u.sample(d.response);
    if (s_hat.contains(y)) return {y, n + 1, AcceptPath::VerifiedCorrect, false};
    if (off_accept >= d.accept) return {y, n + 1, AcceptPath::RsAccept, false};
  }
  return {u.sample(rng.draw(n).response), n + 1, AcceptPath::Fallback, false};
}

EpisodeRecord run_episode(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                          const VerifierSet& s_hat, const DrawStream& rng) {
  EpisodeRecord r;
  switch (config.algorithm()) {
    case Algorithm::AiC: r = run_aic(u, s_hat, rng, config.max_draws()); break;
    case Algorithm::SRS: r = run_srs(u, s_hat, config.beta(), rng, config.max_draws(), config.s_override()); break;
    case Algorithm::SMC: r = run_smc(u, s_hat, config.beta(), rng, config.max_draws(), config.s_override()); break;
    case Algorithm::BoN: r = run_bon(u, s_hat, *config.batch_n(), rng, config.inspection()); break;
    case Algorithm::BRS: r = run_brs(u, s_hat, config.beta(), *config.batch_n(), rng, config.s_override()); break;
  }
  r.hit_ground_truth = s_star.contains(r.chosen_index);
  return r;
}

std::vector<double> exact_induced_distribution(const SamplerConfig& config, const ResponseUniverse& u,
                                               const VerifierSet& s_hat) {
  if (s_hat.universe_size() != u.size()) throw Error(ErrorKind::Membership, "verifier set belongs to another universe");
  const std::size_t k = u.size();
  std::vector<double> nu(k, 0.0);
  const double s_ver = s_hat.mass();

  switch (config.algorithm()) {
    case Algorithm::AiC: {
      if (!(s_ver > 0.0)) throw Error(ErrorKind::DegenerateSet, "AiC is undefined for a verifier set of zero mass");
      for (std::size_t i = 0; i < k; ++i)
        if (s_hat.contains(i)) nu[i] = u.prob(i) / s_ver;
      break;
    }
    case Algorithm::SRS: {
      // Each proposal is returned with probability w(y); the output is mu * w renormalised.
      const Tilt t = tilt_for(s_hat, config.beta(), config.s_override());
      double z = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        nu[i] = u.prob(i) * (s_hat.contains(i) ? 1.0 : t.off / t.envelope);
        z += nu[i];
      }
      if (!(z > 0.0)) throw Error(ErrorKind::NeverTerminates, "SRS accepts nothing for these inputs");
      for (double& x : nu) x /= z;
      break;
    }
    case Algorithm::SMC: {
      // First proposal kept with probability min(1, eta-hat); otherwise the residual mu(. | S-hat) takes over.
      const Tilt t = tilt_for(s_hat, config.beta(), config.s_override());
      double rejected = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double keep = std::min(1.0, s_hat.contains(i) ? t.on : t.off);
        nu[i] = u.prob(i) * keep;
        rejected += u.prob(i) * (1.0 - keep);
      }
      if (rejected > 0.0) {
        if (!(s_ver > 0.0)) throw Error(ErrorKind::NeverTerminates, "SMC residual loop has no verified mass");
        for (std::size_t i = 0; i < k; ++i)
          if (s_hat.contains(i)) nu[i] += rejected * u.prob(i) / s_ver;
      }
      break;
    }
    case Algorithm::BoN: {
      const std::int64_t n = *config.batch_n();
      double on = 0.0, off = 0.0;
      if (config.inspection() == BonInspection::AllResponses) {
        on = static_cast<double>(n + 1) * mean_inverse_share(n, s_ver);
        off = ipow(1.0 - s_ver, n);
      } else {
        const double none_verified = ipow(1.0 - s_ver, n);
        const double last_pick = none_verified / static_cast<double>(n + 1);
        on = (n > 0 ? static_cast<double>(n) * mean_inverse_share(n - 1, s_ver) : 0.0) + last_pick;
        off = (n > 0 ? static_cast<double>(n) / static_cast<double>(n + 1) * ipow(1.0 - s_ver, n - 1) : 0.0) +
              last_pick;
      }
      for (std::size_t i = 0; i < k; ++i) nu[i] = u.prob(i) * (s_hat.contains(i) ? on : off);
      break;
    }
    case Algorithm::BRS: {
      const std::int64_t n = *config.batch_n();
      const Tilt t = tilt_for(s_hat, config.beta(), config.s_override());
      std::vector<double> w(k);
      double accept = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        w[i] = s_hat.contains(i) ? 1.0 : t.off / t.envelope;
        accept += u.prob(i) * w[i];
      }
      // Expected number of inspections that reach step i summed over the first N steps.
      double reach = 0.0, survive = 1.0;
      for (std::int64_t i = 0; i < n; ++i) {
        reach += survive;
        survive *= 1.0 - accept;
      }
      for (std::size_t i = 0; i < k; ++i) nu[i] = u.prob(i) * (w[i] * reach + survive);
      break;
    }
  }
  return nu;
}

double exact_expected_proposals(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_hat) {
  const double s_ver = mass(u, s_hat);
  switch (config.algorithm()) {
    case Algorithm::AiC:
      if (!(s_ver > 0.0)) throw Error(ErrorKind::NeverTerminates, "AiC never terminates with an empty verifier set");
      return 1.0 / s_ver;
    case Algorithm::SRS: {
      const Tilt t = tilt_for(s_hat, config.beta(), config.s_override());
      const double per_draw = s_ver + (1.0 - s_ver) * t.off / t.envelope;
      if (!(per_draw > 0.0)) throw Error(ErrorKind::NeverTerminates, "SRS accepts nothing for these inputs");
      return 1.0 / per_draw;
    }
    case Algorithm::SMC: {
      const Tilt t = tilt_for(s_hat, config.beta(), config.s_override());
      const double rejected = (1.0 - s_ver) * (1.0 - std::min(1.0, t.off)) + s_ver * (1.0 - std::min(1.0, t.on));
      if (rejected <= 0.0) return 1.0;
      if (!(s_ver > 0.0)) throw Error(ErrorKind::NeverTerminates, "SMC residual loop has no verified mass");
      return 1.0 + rejected / s_ver;
    }
    case Algorithm::BoN:
    case Algorithm::BRS:
      return static_cast<double>(*config.batch_n() + 1);
  }
  return 0.0;
}

}  // namespace ttsim
