#include "ttsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "ttsim/errors.hpp"

namespace ttsim {

namespace {

bool interior(double x) { return x > 0.0 && x < 1.0; }

double skyline_of(double s, CoverageBudget beta) { return std::min(1.0, m_beta(s, beta)); }

double mass_on(const std::vector<double>& nu, const VerifierSet& set) {
  double acc = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i)
    if (set.contains(i)) acc += nu[i];
  return acc;
}

struct Failure {
  std::size_t episode = EpisodeError::npos;
  ErrorKind kind = ErrorKind::InvalidArgument;
  std::string what;
};

// Runs episodes [begin, end) into out; stops at the first failure and reports it.
Failure run_block(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                  const VerifierSet& s_hat, std::uint64_t seed, std::size_t begin, std::size_t end,
                  std::vector<EpisodeRecord>& out) {
  for (std::size_t e = begin; e < end; ++e) {
    try {
      out[e] = run_episode(config, u, s_star, s_hat, DrawStream(seed, e));
    } catch (const Error& err) {
      return {e, err.kind(), err.what()};
    } catch (const std::exception& err) {
      // Must not escape a worker thread; anything else is treated as a bad argument.
      return {e, ErrorKind::InvalidArgument, err.what()};
    }
  }
  return {};
}

}  // namespace

double z_score(double empirical, double theory, double se) noexcept {
  const double diff = empirical - theory;
  if (se > 0.0) return diff / se;
  if (std::abs(diff) <= 1e-12) return 0.0;
  return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

double pooled_z(const Estimate& a, const Estimate& b) noexcept {
  return z_score(a.value, b.value, std::sqrt(a.se * a.se + b.se * b.se));
}

TheoryPrediction predict(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                         const VerifierSet& s_hat) {
  const double s = mass(u, s_star);
  const double s_ver = mass(u, s_hat);
  const CoverageBudget beta = config.beta();
  const bool closed_form = !config.s_override() && interior(s) && interior(s_ver) &&
                           !(config.algorithm() == Algorithm::BoN && config.inspection() == BonInspection::FirstN);

  TheoryPrediction p;
  if (interior(s) && interior(s_ver)) p.regime = regime_of(s, s_ver, beta);

  if (closed_form) {
    const RocProfile roc = roc_of(u, s_star, s_hat);
    const double b = beta.value();
    switch (config.algorithm()) {
      case Algorithm::AiC:
        p.subopt = aic_subopt(s, s_ver, roc.youden_j, beta);
        p.expected_proposals = aic_complexity(s_ver);
        if (b > 1.0 / s)
          p.alpha = s / s_ver;
        else if (b > 1.0)
          p.alpha = (1.0 / s_ver) * std::sqrt(s * (1.0 - s) / (b - 1.0));
        return p;
      case Algorithm::SRS:
      case Algorithm::SMC:
        return srs_smc_subopt(s, s_ver, roc.youden_j, beta);
      case Algorithm::BoN:
        p.subopt = bon_subopt_approx(s, s_ver, roc.youden_j, beta, *config.batch_n());
        return p;
      case Algorithm::BRS:
        p.subopt = brs_subopt_approx(s, s_ver, roc.tpr, beta, *config.batch_n(), envelope_m(s_ver, beta));
        return p;
    }
  }

  // No theorem covers these inputs: read the value off the exact induced distribution instead.
  const auto nu = exact_induced_distribution(config, u, s_hat);
  p.subopt = skyline_of(s, beta) - mass_on(nu, s_star);
  if (!is_batched(config.algorithm())) p.expected_proposals = exact_expected_proposals(config, u, s_hat);
  return p;
}

std::vector<EpisodeRecord> run_episodes(const SamplerConfig& config, const ResponseUniverse& u,
                                        const VerifierSet& s_star, const VerifierSet& s_hat, std::size_t episodes,
                                        std::uint64_t master_seed, const EstimateOptions& options) {
  std::vector<EpisodeRecord> records(episodes);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(episodes)));
  std::vector<Failure> failures(workers);

  if (workers == 1) {
    failures[0] = run_block(config, u, s_star, s_hat, master_seed, 0, episodes, records);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (episodes + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(episodes, w * chunk);
      const std::size_t end = std::min(episodes, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        failures[w] = run_block(config, u, s_star, s_hat, master_seed, begin, end, records);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Report the lowest failing episode so the error does not depend on the thread count.
  const Failure* first = nullptr;
  for (const auto& f : failures)
    if (f.episode != EpisodeError::npos && (!first || f.episode < first->episode)) first = &f;
  if (first) throw EpisodeError(first->kind, first->episode, options.grid_index, first->what);
  return records;
}

EstimateReport summarize(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                         const VerifierSet& s_hat, const std::vector<EpisodeRecord>& records) {
  const std::size_t n = records.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 episodes for a standard error");
  const double dn = static_cast<double>(n);

  EstimateReport r;
  r.episodes = n;
  r.histogram.assign(u.size(), 0);
  double sum_prop = 0.0;
  for (const auto& rec : records) {
    r.hits += rec.hit_ground_truth ? 1 : 0;
    r.histogram[rec.chosen_index] += 1;
    r.path_counts[static_cast<std::size_t>(rec.accept_path)] += 1;
    sum_prop += static_cast<double>(rec.proposals_used);
  }
  const double mean_prop = sum_prop / dn;
  double ss = 0.0;
  for (const auto& rec : records) {
    const double d = static_cast<double>(rec.proposals_used) - mean_prop;
    ss += d * d;
  }
  r.proposals_variance = ss / (dn - 1.0);
  r.proposals = {mean_prop, std::sqrt(r.proposals_variance / dn)};

  r.accuracy = static_cast<double>(r.hits) / dn;
  r.skyline = skyline_of(mass(u, s_star), config.beta());
  r.subopt = {r.skyline - r.accuracy, std::sqrt(r.accuracy * (1.0 - r.accuracy) / (dn - 1.0))};

  double chi = 0.0, bias = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double mu = u.prob(i);
    if (mu == 0.0) continue;
    const double h = static_cast<double>(r.histogram[i]) / dn;
    chi += h * h / mu;
    bias += h * (1.0 - h) / (dn * mu);
  }
  r.empirical_chi2 = chi - 1.0;
  r.chi2_bias = bias;

  const auto nu = exact_induced_distribution(config, u, s_hat);
  r.exact_chi2 = chi_squared(u, nu);
  r.exact_accuracy = mass_on(nu, s_star);
  r.exact_proposals = exact_expected_proposals(config, u, s_hat);

  r.theory = predict(config, u, s_star, s_hat);
  r.z.subopt = z_score(r.subopt.value, r.theory.subopt, r.subopt.se);
  if (r.theory.expected_proposals) r.z.proposals = z_score(mean_prop, *r.theory.expected_proposals, r.proposals.se);
  return r;
}

EstimateReport estimate(const SamplerConfig& config, const ResponseUniverse& u, const VerifierSet& s_star,
                        const VerifierSet& s_hat, std::size_t episodes, std::uint64_t master_seed,
                        const EstimateOptions& options) {
  if (episodes < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 episodes for a standard error");
  return summarize(config, u, s_star, s_hat, run_episodes(config, u, s_star, s_hat, episodes, master_seed, options));
}

std::vector<EstimateReport> sweep(const std::vector<SamplerConfig>& configs, const ResponseUniverse& u,
                                  const VerifierSet& s_star, const VerifierSet& s_hat, std::size_t episodes,
                                  std::uint64_t master_seed, const EstimateOptions& options) {
  if (configs.empty()) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one grid point");
  std::vector<EstimateReport> out;
  out.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    EstimateOptions point = options;
    point.grid_index = i;
    out.push_back(estimate(configs[i], u, s_star, s_hat, episodes, derive_seed(master_seed, i), point));
  }
  return out;
}

}  // namespace ttsim
