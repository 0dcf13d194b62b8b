#include "doctest.h"
#include "ttsim/errors.hpp"
#include "ttsim/theory.hpp"

#include <cmath>

using namespace ttsim;

namespace {

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

// Frozen mpmath values (40 digits).
constexpr double kSrsSmcPiA = 0.42487243569579452;  // s=0.25, s_ver=0.5, J=0.5, beta=3
constexpr double kBonNmax = 1.7715533031636120;     // s=0.5, beta=1.5
constexpr double kBrsExample = 0.17403810567665797;  // s=0.25, beta=2, N=2, M=m/s

CoverageBudget B(double b) { return CoverageBudget(b); }

}  // namespace

TEST_CASE("AiC complexity and minimum budget") {
  CHECK(aic_complexity(1.0) == 1.0);
  CHECK(aic_complexity(0.2) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(aic_complexity(0.125) == 8.0);
  try {
    aic_complexity(0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NeverTerminates);
  }
  CHECK(aic_min_beta(0.5).value() == 2.0);
  CHECK(aic_min_beta(1.0).value() == 1.0);
  CHECK(aic_min_beta(0.25).value() == 4.0);
}

TEST_CASE("AiC sub-optimality") {
  CHECK(close(aic_subopt(0.25, 0.5, 0.5, B(5)), 0.5625));
  CHECK(close(aic_subopt(0.25, 0.5, 0.0, B(2)), otc(0.25, B(2))));
  // Perfect verifier at the boundary beta = 1/s.
  CHECK(close(aic_subopt(0.25, 0.25, 1.0, B(4)), 0.0));
}

TEST_CASE("SRS/SMC complexity") {
  CHECK(srs_smc_complexity(0.3, B(1)) == 1.0);
  CHECK(close(srs_smc_complexity(0.5, B(1.5)), 1.7071067811865475, 1e-15));
  CHECK(close(srs_smc_complexity(0.25, B(4)), 4.0));
  CHECK(srs_smc_complexity(0.25, B(7)) == 4.0);
}

TEST_CASE("SRS/SMC sub-optimality") {
  const auto p = srs_smc_subopt(0.25, 0.5, 0.5, B(3));
  REQUIRE(p.regime);
  CHECK(p.regime->tag == RegimeTag::PolicyImprovement);
  CHECK(p.regime->sub_case == PolicyImprovementCase::VerifierHeavier);
  CHECK(close(p.subopt, kSrsSmcPiA, 1e-15));
  REQUIRE(p.alpha);

  for (double b : {1.0, 1.5, 2.0, 3.0, 5.0, 20.0}) {
    // Perfect verifier tracks the skyline in every regime.
    CHECK(close(srs_smc_subopt(0.3, 0.3, 1.0, B(b)).subopt, 0.0));
    // An uninformative verifier leaves the bare transport cost.
    CHECK(close(srs_smc_subopt(0.3, 0.6, 0.0, B(b)).subopt, otc(0.3, B(b))));
  }
}

TEST_CASE("SRS/SMC sub-optimality is continuous at the regime breakpoints") {
  for (auto [s, sv] : {std::pair{0.25, 0.5}, {0.4, 0.28}, {0.1, 0.7}, {0.6, 0.2}}) {
    for (double edge : {1.0 / s, 1.0 / sv}) {
      const double below = srs_smc_subopt(s, sv, 0.4, B(edge * (1 - 1e-12))).subopt;
      const double above = srs_smc_subopt(s, sv, 0.4, B(edge * (1 + 1e-12))).subopt;
      CHECK(close(below, above, 1e-9));
    }
  }
}

TEST_CASE("SRS/SMC sub-optimality has the three-regime shape when the verifier is lighter") {
  const double s = 0.4, sv = 0.28;
  for (double j : {0.1, 0.35, 0.68}) {
    double prev = -1.0;
    for (double b = 1.0; b <= 1.0 / s; b += 0.01) {  // transport: non-decreasing
      const double v = srs_smc_subopt(s, sv, j, B(b)).subopt;
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    prev = srs_smc_subopt(s, sv, j, B(1.0 / s)).subopt;
    for (double b = 1.0 / s; b <= 1.0 / sv; b += 0.01) {  // policy improvement (b): non-increasing
      const double v = srs_smc_subopt(s, sv, j, B(b)).subopt;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
    const double flat = srs_smc_subopt(s, sv, j, B(1.0 / sv + 0.01)).subopt;
    for (double b = 1.0 / sv + 0.01; b < 12; b += 0.5) CHECK(close(srs_smc_subopt(s, sv, j, B(b)).subopt, flat));
  }
}

TEST_CASE("BoN admissible batch size, literal reading") {
  const auto inf = bon_max_batch(0.2, B(4));
  CHECK(inf.kind == BatchLimit::Kind::Infinite);
  // beta >= 1 always exceeds s(1-s) <= 1/4, so the literal third case never fires.
  CHECK(bon_max_batch(0.5, B(1.2)).kind != BatchLimit::Kind::Undetermined);
  const auto mid = bon_max_batch(0.1, B(3));
  REQUIRE(mid.kind == BatchLimit::Kind::Finite);
  CHECK(close(mid.value, std::log1p(-std::sqrt(2 * 0.1 / 0.9)) / std::log1p(-0.1)));
  CHECK(mid.floored == static_cast<std::int64_t>(std::floor(mid.value)));
}

TEST_CASE("BoN admissible batch size, chi-squared reading") {
  const auto mid = bon_max_batch(0.5, B(1.5), BonBatchRule::ChiSquare);
  REQUIRE(mid.kind == BatchLimit::Kind::Finite);
  CHECK(close(mid.value, kBonNmax, 1e-15));
  CHECK(mid.floored == 1);
  // The bound is tight: N=1 fits the budget, N=2 does not.
  CHECK(bon_chi_squared(0.5, 1) <= 0.5);
  CHECK(bon_chi_squared(0.5, 2) > 0.5);

  CHECK(bon_max_batch(0.5, B(1.2), BonBatchRule::ChiSquare).kind == BatchLimit::Kind::Undetermined);
  CHECK(bon_max_batch(0.2, B(5), BonBatchRule::ChiSquare).kind == BatchLimit::Kind::Infinite);
}

TEST_CASE("BoN sub-optimality") {
  CHECK(close(bon_subopt_exact(0.5, B(2), 1), 0.25));
  CHECK(close(bon_subopt_exact(0.5, B(3), 3), 0.0625));
  CHECK(close(bon_subopt_exact(0.4, B(1), 0), 0.0));

  CHECK(close(bon_subopt_approx(0.25, 0.5, 0.5, B(5), 2), 0.609375));
  CHECK(close(bon_subopt_approx(0.25, 0.5, 0.5, B(1.5), 0),
              0.75 - std::max(0.0, 1 - m_beta(0.25, B(1.5)))));
  // Large N in saturation approaches AiC's saturated value.
  CHECK(close(bon_subopt_approx(0.25, 0.5, 0.5, B(5), 200), 0.75 * (1 - 0.5 * 0.5), 1e-12));
  // Exact verifier: the approximate form reduces to the exact one.
  for (std::int64_t n = 0; n < 6; ++n)
    CHECK(close(bon_subopt_approx(0.3, 0.3, 1.0, B(1.7), n), bon_subopt_exact(0.3, B(1.7), n)));
}

TEST_CASE("BRS sub-optimality") {
  const double m_env = m_beta(0.25, B(2)) / 0.25;
  CHECK(close(brs_subopt_exact(0.25, B(2), 2, m_env), kBrsExample, 1e-15));
  CHECK(close(brs_subopt_exact(0.25, B(2), 0, m_env), otc(0.25, B(2))));
  CHECK(brs_subopt_exact(0.25, B(2), 3, 1.0) == 0.0);

  CHECK(close(brs_subopt_approx(0.25, 0.5, 0.75, B(5), 1, 2.0), 0.6875));
  for (double b : {1.3, 2.0, 3.0, 6.0}) {
    CHECK(close(brs_subopt_approx(0.25, 0.5, 0.75, B(b), 0, 2.0), otc(0.25, B(b))));
    for (std::int64_t n = 0; n < 5; ++n) {
      const double m = envelope_m(0.3, B(b));
      CHECK(close(brs_subopt_approx(0.3, 0.3, 1.0, B(b), n, m), brs_subopt_exact(0.3, B(b), n, m)));
    }
  }
}

TEST_CASE("degeneracy at beta = 1 with a perfect verifier") {
  const double s = 0.35;
  CHECK(close(srs_smc_subopt(s, s, 1.0, B(1)).subopt, 0.0));
  CHECK(close(brs_subopt_exact(s, B(1), 4, envelope_m(s, B(1))), 0.0));
  CHECK(close(brs_subopt_approx(s, s, 1.0, B(1), 4, envelope_m(s, B(1))), 0.0));
  CHECK(close(bon_subopt_exact(s, B(1), 0), 0.0));
}

TEST_CASE("Radon-Nikodym derivatives and BoN chi-squared") {
  auto d = bon_rn_derivative(0.3, 0);
  CHECK(close(d.on_value, 1.0));
  CHECK(d.off_value == 1.0);
  d = bon_rn_derivative(0.5, 1);
  CHECK(close(d.on_value, 1.5));
  CHECK(close(d.off_value, 0.5));
  d = bon_rn_derivative(0.4, 400);
  CHECK(close(d.on_value, 2.5));
  CHECK(close(d.off_value, 0.0));

  auto r = brs_rn_derivative(2.0, 0.5, 2.0, 1);
  CHECK(close(r.on_value, 1.5));
  CHECK(close(r.off_value, 0.75));
  r = brs_rn_derivative(2.0, 0.5, 2.0, 0);
  CHECK(r.on_value == 1.0);
  r = brs_rn_derivative(2.0, 0.5, 1.0, 3);
  CHECK(r.on_value == 2.0);
  CHECK(r.off_value == 0.5);

  CHECK(bon_chi_squared(0.3, 0) == 0.0);
  CHECK(close(bon_chi_squared(0.5, 1), 0.25));
  CHECK(close(bon_chi_squared(0.2, 500), 4.0));
  for (double s : {0.1, 0.37, 0.8})
    for (std::int64_t n = 0; n < 9; ++n) {
      const auto rn = bon_rn_derivative(s, n);
      const double chi = s * rn.on_value * rn.on_value + (1 - s) * rn.off_value * rn.off_value - 1.0;
      CHECK(close(chi, bon_chi_squared(s, n)));
    }
}
