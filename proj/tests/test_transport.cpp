#include "doctest.h"
#include "ttsim/errors.hpp"
#include "ttsim/transport.hpp"
#include "ttsim/verify/oracles.hpp"

#include <cmath>
#include <numeric>

using namespace ttsim;

namespace {

// Reference values computed with mpmath at 40 digits and frozen here.
constexpr double kM_025_2 = 0.68301270189221932;
constexpr double kOn_025_2 = 2.7320508075688773;
constexpr double kOff_025_2 = 0.42264973081037424;
constexpr double kOtc_025_2 = 0.43301270189221932;
constexpr double kEnv_05_15 = 1.7071067811865475;

bool close(double a, double b, double tol = 1e-15) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("coverage budget rejects sub-unit and non-finite values") {
  CHECK_THROWS_AS(CoverageBudget{0.999}, Error);
  CHECK_THROWS_AS(CoverageBudget{NAN}, Error);
  CHECK_THROWS_AS(CoverageBudget{INFINITY}, Error);
  CHECK(CoverageBudget(1.0).radius() == 0.0);
  CHECK(CoverageBudget(2.5).radius() == 1.5);
}

TEST_CASE("m_beta") {
  CHECK(m_beta(0.25, CoverageBudget(1)) == 0.25);
  CHECK(close(m_beta(0.25, CoverageBudget(2)), kM_025_2));
  CHECK(m_beta(1.0, CoverageBudget(7)) == 1.0);
  // Not clipped: s=0.5, beta=10 gives 0.5 + sqrt(0.25*9) = 2.
  CHECK(close(m_beta(0.5, CoverageBudget(10)), 2.0));
  // m hits 1 exactly at beta = 1/s.
  CHECK(close(m_beta(0.25, CoverageBudget(4)), 1.0));
  double prev = 0.0;
  for (double b = 1.0; b < 20; b += 0.37) {
    const double m = m_beta(0.3, CoverageBudget(b));
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("tilted density") {
  auto d = tilted_density(0.25, CoverageBudget(1));
  CHECK(d.on_value == 1.0);
  CHECK(d.off_value == 1.0);

  d = tilted_density(0.25, CoverageBudget(2));
  CHECK(close(d.on_value, kOn_025_2, 4e-16));
  CHECK(close(d.off_value, kOff_025_2, 4e-16));

  d = tilted_density(0.25, CoverageBudget(4));
  CHECK(close(d.on_value, 4.0));
  CHECK(d.off_value == 0.0);
  d = tilted_density(0.25, CoverageBudget(9));
  CHECK(d.on_value == 4.0);
  CHECK(d.off_value == 0.0);

  d = tilted_density(1.0, CoverageBudget(3));
  CHECK(d.on_value == 1.0);
  CHECK(d.off_value == 0.0);

  for (double s : {0.05, 0.3, 0.7, 0.95})
    for (double b : {1.0, 1.1, 2.0, 5.0, 40.0}) {
      d = tilted_density(s, CoverageBudget(b));
      CHECK(close(d.on_value * s + d.off_value * (1 - s), 1.0, 1e-12));
      CHECK(d.on_value >= d.off_value);
      CHECK(d.off_value >= 0.0);
    }
  CHECK_THROWS_AS(tilted_density(0.0, CoverageBudget(2)), Error);
}

TEST_CASE("optimal policy is feasible, binding and optimal on small simplices") {
  const ResponseUniverse u({"a", "b", "c", "d", "e"}, {0.35, 0.25, 0.2, 0.12, 0.08});
  const std::vector<std::size_t> idx{0, 2};
  const auto set = VerifierSet::from_indices(u, idx);
  const double s = set.mass();
  for (double b : {1.0, 1.2, 1.5, 1.8, 1.0 / s, 3.0, 10.0}) {
    const CoverageBudget beta(b);
    const auto p = optimal_policy(u, set, beta);
    CHECK(close(std::accumulate(p.distribution.begin(), p.distribution.end(), 0.0), 1.0, 1e-12));
    const double chi = chi_squared(u, p.distribution);
    CHECK(chi <= beta.radius() + 1e-9);
    if (m_beta(s, beta) < 1.0) CHECK(close(chi, beta.radius(), 1e-12));
    CHECK(close(p.m, std::min(1.0, m_beta(s, beta)), 1e-15));

    const auto best = oracle::maximize_set_mass(u.probs(), set.mask(), b);
    CHECK(close(p.m, best.set_mass, 1e-9));
  }
  CHECK_THROWS_AS(optimal_policy(u, VerifierSet::nothing(u), CoverageBudget(2)), Error);
}

TEST_CASE("chi-squared divergence") {
  const auto u = ResponseUniverse::uniform(2);
  const std::vector<double> same{0.5, 0.5}, point{1.0, 0.0};
  CHECK(chi_squared(u, same) == 0.0);
  CHECK(close(chi_squared(u, point), 1.0));

  const ResponseUniverse holes({"a", "b", "c"}, {0.5, 0.5, 0.0});
  const std::vector<double> bad{0.4, 0.4, 0.2};
  try {
    chi_squared(holes, bad);
    FAIL("expected an absolute-continuity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AbsoluteContinuity);
  }
}

TEST_CASE("transport cost") {
  CHECK(otc(0.25, CoverageBudget(1)) == 0.0);
  CHECK(close(otc(0.25, CoverageBudget(2)), kOtc_025_2));
  CHECK(otc(0.25, CoverageBudget(4)) == 0.75);
  CHECK(otc(0.25, CoverageBudget(100)) == 0.75);

  // Equals the total variation between mu and the optimal policy.
  const auto u = ResponseUniverse::dirichlet(7, 1.0, 11);
  const std::vector<std::size_t> idx{1, 3, 4};
  const auto set = VerifierSet::from_indices(u, idx);
  for (double b : {1.0, 1.3, 2.0, 6.0, 30.0}) {
    const auto p = optimal_policy(u, set, CoverageBudget(b));
    CHECK(close(total_variation(u.probs(), p.distribution), otc(set.mass(), CoverageBudget(b)), 1e-12));
  }
}

TEST_CASE("regimes") {
  auto r = regime_of(0.5, 0.5, CoverageBudget(1.5));
  CHECK(r.tag == RegimeTag::Transport);
  r = regime_of(0.25, 0.5, CoverageBudget(3));
  CHECK(r.tag == RegimeTag::PolicyImprovement);
  CHECK(r.sub_case == PolicyImprovementCase::VerifierHeavier);
  CHECK(to_string(r) == "policy-improvement-a");
  r = regime_of(0.5, 0.25, CoverageBudget(3));
  CHECK(r.sub_case == PolicyImprovementCase::VerifierLighter);
  CHECK(to_string(r) == "policy-improvement-b");
  r = regime_of(0.25, 0.5, CoverageBudget(5));
  CHECK(r.tag == RegimeTag::Saturation);
  CHECK(r.lower == 2.0);
  CHECK(r.upper == 4.0);

  // Closed on the right: the breakpoints belong to the lower regime.
  CHECK(regime_of(0.25, 0.5, CoverageBudget(2)).tag == RegimeTag::Transport);
  CHECK(regime_of(0.25, 0.5, CoverageBudget(4)).tag == RegimeTag::PolicyImprovement);

  // Exactly two breakpoints.
  int changes = 0;
  auto last = regime_of(0.3, 0.6, CoverageBudget(1)).tag;
  for (double b = 1.0; b < 10.0; b += 0.01) {
    const auto tag = regime_of(0.3, 0.6, CoverageBudget(b)).tag;
    changes += tag != last;
    last = tag;
  }
  CHECK(changes == 2);
}

TEST_CASE("rejection envelope") {
  CHECK(envelope_m(0.3, CoverageBudget(1)) == 1.0);
  CHECK(close(envelope_m(0.25, CoverageBudget(4)), 4.0));
  CHECK(envelope_m(0.25, CoverageBudget(9)) == 4.0);
  CHECK(close(envelope_m(0.5, CoverageBudget(1.5)), kEnv_05_15));
}
