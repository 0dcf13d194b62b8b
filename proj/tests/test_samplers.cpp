#include "doctest.h"
#include "ttsim/errors.hpp"
#include "ttsim/montecarlo.hpp"
#include "ttsim/samplers.hpp"
#include "ttsim/scenario.hpp"
#include "ttsim/theory.hpp"
#include "ttsim/verify/oracles.hpp"

#include <cmath>
#include <numeric>

using namespace ttsim;

namespace {

CoverageBudget B(double b) { return CoverageBudget(b); }

ResponseUniverse five() { return ResponseUniverse({"a", "b", "c", "d", "e"}, {0.3, 0.25, 0.2, 0.15, 0.1}); }

VerifierSet ids(const ResponseUniverse& u, std::vector<std::size_t> idx) { return VerifierSet::from_indices(u, idx); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<std::uint64_t> histogram(const SamplerConfig& c, const ResponseUniverse& u, const VerifierSet& s_star,
                                     const VerifierSet& s_hat, std::size_t episodes, std::uint64_t seed) {
  std::vector<std::uint64_t> h(u.size(), 0);
  for (const auto& r : run_episodes(c, u, s_star, s_hat, episodes, seed)) h[r.chosen_index]++;
  return h;
}

std::vector<SamplerConfig> config_zoo() {
  std::vector<SamplerConfig> out;
  out.push_back(SamplerConfig::aic(B(1.5)));
  for (double b : {1.0, 1.3, 2.0, 6.0}) {
    out.push_back(SamplerConfig::srs(B(b)));
    out.push_back(SamplerConfig::smc(B(b)));
  }
  for (std::int64_t n : {0, 1, 3}) {
    out.push_back(SamplerConfig::bon(B(1.5), n));
    out.push_back(SamplerConfig::bon(B(1.5), n, BonInspection::FirstN));
    out.push_back(SamplerConfig::brs(B(1.5), n));
  }
  out.push_back(SamplerConfig::srs(B(1.5), 0.4));
  out.push_back(SamplerConfig::brs(B(2.0), 2, 0.6));
  return out;
}

}  // namespace

TEST_CASE("configuration validation") {
  CHECK_THROWS(SamplerConfig::bon(B(1.5), -1));
  CHECK_THROWS(SamplerConfig::brs(B(1.5), -2));
  CHECK_THROWS(SamplerConfig::srs(B(1.5), 0.0));
  CHECK_THROWS(SamplerConfig::srs(B(1.5), 1.2));
  CHECK_THROWS(SamplerConfig::make(Algorithm::BoN, B(1.5), std::nullopt, std::nullopt));
  CHECK(SamplerConfig::srs(B(1.5), 1.0).s_override() == 1.0);
}

TEST_CASE("AiC on a full-support verifier stops at the first draw") {
  const auto u = ResponseUniverse::uniform(4);
  const auto all = VerifierSet::everything(u);
  for (std::uint64_t e = 0; e < 100; ++e) {
    const auto r = run_aic(u, all, DrawStream(7, e));
    CHECK(r.proposals_used == 1);
    CHECK(r.accept_path == AcceptPath::VerifiedCorrect);
  }
}

TEST_CASE("AiC with an empty verifier set exhausts its budget") {
  const auto u = ResponseUniverse::uniform(4);
  try {
    (void)run_aic(u, VerifierSet::nothing(u), DrawStream(1, 0), 10);
    FAIL("expected BudgetExhaustedError");
  } catch (const BudgetExhaustedError& e) {
    CHECK(e.draws_used() == 10);
    CHECK(e.kind() == ErrorKind::BudgetExhausted);
  }
}

TEST_CASE("with no coverage slack SRS and SMC return the first draw") {
  const auto u = five();
  const auto s_hat = ids(u, {0, 2});
  for (std::uint64_t e = 0; e < 200; ++e) {
    const DrawStream rng(11, e);
    const auto a = run_srs(u, s_hat, B(1.0), rng);
    const auto b = run_smc(u, s_hat, B(1.0), rng);
    CHECK(a.proposals_used == 1);
    CHECK(b.proposals_used == 1);
    CHECK(b.accept_path == AcceptPath::CouplingAccept);
    CHECK(a.chosen_index == u.sample(rng.draw(0).response));
    CHECK(b.chosen_index == a.chosen_index);
  }
}

TEST_CASE("BoN always spends N+1 proposals and BRS with N = 0 falls back to one draw") {
  const auto u = five();
  const auto s_hat = ids(u, {1, 3});
  for (std::uint64_t e = 0; e < 100; ++e) {
    CHECK(run_bon(u, s_hat, 3, DrawStream(3, e)).proposals_used == 4);
    const auto r = run_brs(u, s_hat, B(2.0), 0, DrawStream(3, e));
    CHECK(r.proposals_used == 1);
    CHECK(r.accept_path == AcceptPath::Fallback);
  }
}

TEST_CASE("exact induced distributions") {
  const auto u = five();
  const auto s_hat = ids(u, {0, 3});  // mass .45
  const double sv = 0.45;

  SUBCASE("each is a probability vector") {
    for (const auto& c : config_zoo()) CHECK(sum(exact_induced_distribution(c, u, s_hat)) == doctest::Approx(1.0));
  }
  SUBCASE("AiC is mu conditioned on the verifier set") {
    const auto nu = exact_induced_distribution(SamplerConfig::aic(), u, s_hat);
    CHECK(nu[0] == doctest::Approx(0.3 / sv));
    CHECK(nu[3] == doctest::Approx(0.15 / sv));
    CHECK(nu[1] == 0.0);
  }
  SUBCASE("SRS and SMC coincide and equal the tilted density times mu") {
    for (double b : {1.0, 1.2, 1.8, 2.2, 3.0, 10.0}) {
      const auto a = exact_induced_distribution(SamplerConfig::srs(B(b)), u, s_hat);
      const auto c = exact_induced_distribution(SamplerConfig::smc(B(b)), u, s_hat);
      const auto t = tilted_density(sv, B(b));
      for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(a[i] == doctest::Approx(c[i]).epsilon(1e-12));
        CHECK(a[i] == doctest::Approx(u.prob(i) * (s_hat.contains(i) ? t.on_value : t.off_value)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("BRS with N = 1 and M = 2 mixes the conditional and the prior equally") {
    const auto u2 = ResponseUniverse::uniform(4);
    const auto half = ids(u2, {0, 1});
    const auto nu = exact_induced_distribution(SamplerConfig::brs(B(3.0), 1), u2, half);
    CHECK(envelope_m(0.5, B(3.0)) == doctest::Approx(2.0));
    CHECK(nu[0] == doctest::Approx(0.5 * 0.5 + 0.5 * 0.25));
    CHECK(nu[2] == doctest::Approx(0.5 * 0.25));
  }
  SUBCASE("batched samplers agree with brute-force enumeration") {
    for (std::int64_t n : {0, 1, 2, 3}) {
      for (auto insp : {BonInspection::AllResponses, BonInspection::FirstN}) {
        const auto nu = exact_induced_distribution(SamplerConfig::bon(B(1.5), n, insp), u, s_hat);
        const auto en = oracle::enumerate_bon(u, s_hat, n, insp);
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(nu[i] == doctest::Approx(en[i]).epsilon(1e-12));
      }
      for (double b : {1.2, 2.0, 5.0}) {
        const auto nu = exact_induced_distribution(SamplerConfig::brs(B(b), n), u, s_hat);
        const auto en = oracle::enumerate_brs(u, s_hat, sv, b, n);
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(nu[i] == doctest::Approx(en[i]).epsilon(1e-12));
      }
    }
  }
  SUBCASE("assuming s = 1 reduces SRS and SMC to AiC") {
    const auto aic = exact_induced_distribution(SamplerConfig::aic(), u, s_hat);
    for (double b : {1.0, 1.5, 4.0}) {
      for (const auto& c : {SamplerConfig::srs(B(b), 1.0), SamplerConfig::smc(B(b), 1.0)}) {
        const auto nu = exact_induced_distribution(c, u, s_hat);
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(nu[i] - aic[i]) <= 1e-12);
      }
    }
  }

}

TEST_CASE("empirical histograms pass a goodness-of-fit test against the exact distributions") {
  const auto u = five();
  const auto s_star = ids(u, {0, 2});
  const auto s_hat = ids(u, {0, 3});
  const auto zoo = config_zoo();
  for (std::size_t k = 0; k < zoo.size(); ++k) {
    CAPTURE(k);
    CAPTURE(to_string(zoo[k].algorithm()));
    const auto h = histogram(zoo[k], u, s_star, s_hat, 20000, derive_seed(99, k));
    const auto nu = exact_induced_distribution(zoo[k], u, s_hat);
    CHECK(oracle::gof_p_value(h, nu) > 0.001);
  }
}

TEST_CASE("expected proposals") {
  const auto u = five();
  const auto s_hat = ids(u, {0, 3});
  CHECK(exact_expected_proposals(SamplerConfig::aic(), u, s_hat) == doctest::Approx(1.0 / 0.45));
  for (double b : {1.0, 1.5, 2.2, 4.0})
    CHECK(exact_expected_proposals(SamplerConfig::srs(B(b)), u, s_hat) ==
          doctest::Approx(srs_smc_complexity(0.45, B(b))));
  CHECK(exact_expected_proposals(SamplerConfig::bon(B(1.5), 4), u, s_hat) == 5.0);
}

TEST_CASE("SRS stopping time is geometric: mean and variance") {
  const auto u = five();
  const auto s_hat = ids(u, {3});  // mass .15
  const double sv = 0.15;
  const double b = 3.0;
  const double p = sv / std::min(1.0, m_beta(sv, B(b)));
  const std::size_t n = 40000;
  const auto recs = run_episodes(SamplerConfig::srs(B(b)), u, s_hat, s_hat, n, 2718);
  double mean = 0.0;
  for (const auto& r : recs) mean += static_cast<double>(r.proposals_used);
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (const auto& r : recs) {
    const double d = static_cast<double>(r.proposals_used) - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n - 1;
  m4 /= n;
  const double se_mean = std::sqrt(m2 / n);
  const double se_var = std::sqrt((m4 - m2 * m2) / n);
  CHECK(std::abs(mean - 1.0 / p) <= 3 * se_mean);
  CHECK(std::abs(m2 - (1.0 - p) / (p * p)) <= 3 * se_var);
}

TEST_CASE("SMC accepts its first draw with probability 1 - (m - s_ver)") {
  const auto u = five();
  const auto s_hat = ids(u, {1, 4});  // mass .35
  const double sv = 0.35;
  for (double b : {1.2, 1.6, 2.5}) {
    CAPTURE(b);
    const double m = std::min(1.0, m_beta(sv, B(b)));
    const double expect = 1.0 - (m - sv);
    const std::size_t n = 20000;
    std::size_t first = 0;
    for (const auto& r : run_episodes(SamplerConfig::smc(B(b)), u, s_hat, s_hat, n, 31337)) first += r.proposals_used == 1;
    const double phat = static_cast<double>(first) / n;
    CHECK(std::abs(phat - expect) <= 3 * std::sqrt(expect * (1 - expect) / n));
  }
}

TEST_CASE("closed-form sub-optimality equals skyline minus exact mass on S*") {
  for (const auto& b : bundled_scenarios()) {
    const auto sc = build_scenario(parse_scenario(b.text));
    CAPTURE(sc.name);
    const double s = sc.s_star.mass();
    for (double beta : {1.0, 1.1, 1.5, 2.0, 2.7, 3.5, 5.0, 9.0}) {
      std::vector<SamplerConfig> cs{SamplerConfig::aic(B(beta)), SamplerConfig::srs(B(beta)),
                                    SamplerConfig::smc(B(beta))};
      for (std::int64_t n : {0, 1, 2, 5}) {
        cs.push_back(SamplerConfig::bon(B(beta), n));
        cs.push_back(SamplerConfig::brs(B(beta), n));
      }
      for (const auto& c : cs) {
        CAPTURE(beta);
        CAPTURE(to_string(c.algorithm()));
        const auto nu = exact_induced_distribution(c, sc.universe, sc.s_hat);
        double hit = 0.0;
        for (std::size_t i = 0; i < nu.size(); ++i)
          if (sc.s_star.contains(i)) hit += nu[i];
        const double exact = std::min(1.0, m_beta(s, B(beta))) - hit;
        CHECK(predict(c, sc.universe, sc.s_star, sc.s_hat).subopt == doctest::Approx(exact).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("episodes are reproducible from (seed, episode)") {
  const auto u = five();
  const auto s_hat = ids(u, {0, 3});
  for (const auto& c : config_zoo()) {
    for (std::uint64_t e : {0ull, 5ull, 123456789ull}) {
      const auto a = run_episode(c, u, s_hat, s_hat, DrawStream(8, e));
      const auto b = run_episode(c, u, s_hat, s_hat, DrawStream(8, e));
      CHECK(a.chosen_index == b.chosen_index);
      CHECK(a.proposals_used == b.proposals_used);
      CHECK(a.accept_path == b.accept_path);
    }
  }
}
