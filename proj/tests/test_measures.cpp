#include "doctest.h"
#include "ttsim/errors.hpp"
#include "ttsim/measures.hpp"

#include <cmath>
#include <numeric>

using namespace ttsim;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

const std::vector<std::string> kAbc{"a", "b", "c"};

}  // namespace

TEST_CASE("universe validation rejects malformed measures") {
  CHECK(kind_of([] { ResponseUniverse({}, {}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ResponseUniverse(kAbc, {0.5, 0.5}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ResponseUniverse(kAbc, {0.5, 0.6, -0.1}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ResponseUniverse(kAbc, {0.5, 0.3, 0.3}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ResponseUniverse({"a", "a", "c"}, {0.5, 0.3, 0.2}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ResponseUniverse(kAbc, {0.5, NAN, 0.5}); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(ResponseUniverse(kAbc, {0.5, 0.3, 0.2}));
}

TEST_CASE("generators are normalised and deterministic") {
  const auto u = ResponseUniverse::uniform(4);
  for (double p : u.probs()) CHECK(p == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(u.id(3) == "y3");

  const auto z = ResponseUniverse::zipf(64, 0.6);
  CHECK(std::accumulate(z.probs().begin(), z.probs().end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  for (std::size_t i = 1; i < z.size(); ++i) CHECK(z.prob(i) < z.prob(i - 1));
  CHECK(z.prob(0) / z.prob(1) == doctest::Approx(std::pow(2.0, 0.6)));

  const auto d1 = ResponseUniverse::dirichlet(8, 0.8, 7);
  const auto d2 = ResponseUniverse::dirichlet(8, 0.8, 7);
  const auto d3 = ResponseUniverse::dirichlet(8, 0.8, 8);
  CHECK(d1.probs() == d2.probs());
  CHECK(d1.probs() != d3.probs());
  CHECK(std::accumulate(d1.probs().begin(), d1.probs().end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("inverse-cdf sampling follows the fixed id order") {
  const ResponseUniverse u(kAbc, {0.5, 0.3, 0.2});
  CHECK(u.sample(1e-9) == 0);
  CHECK(u.sample(0.49) == 0);
  CHECK(u.sample(0.51) == 1);
  CHECK(u.sample(0.79) == 1);
  CHECK(u.sample(0.81) == 2);
  CHECK(u.sample(1.0 - 1e-12) == 2);
}

TEST_CASE("set masses") {
  const auto u4 = ResponseUniverse::uniform(4);
  CHECK(mass(u4, VerifierSet::everything(u4)) == 1.0);
  CHECK(mass(u4, VerifierSet::nothing(u4)) == 0.0);

  const ResponseUniverse u(kAbc, {0.5, 0.3, 0.2});
  const std::vector<std::string> ab{"a", "b"};
  const auto set = VerifierSet::from_ids(u, ab);
  CHECK(mass(u, set) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(mass(u, set) + mass(u, set.complement(u)) == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<std::string> bad{"a", "zz"};
  CHECK(kind_of([&] { VerifierSet::from_ids(u, bad); }) == ErrorKind::Membership);
  CHECK(kind_of([&] { u.index_of("zz"); }) == ErrorKind::Membership);
}

TEST_CASE("ROC profile of a verifier") {
  const auto u = ResponseUniverse::uniform(10);
  const std::vector<std::size_t> star{0, 1, 2, 3};
  const auto s_star = VerifierSet::from_indices(u, star);

  auto perfect = roc_of(u, s_star, s_star);
  CHECK(perfect.tpr == 1.0);
  CHECK(perfect.fpr == 0.0);
  CHECK(perfect.youden_j == 1.0);

  auto inverted = roc_of(u, s_star, s_star.complement(u));
  CHECK(inverted.tpr == 0.0);
  CHECK(inverted.fpr == 1.0);
  CHECK(inverted.youden_j == -1.0);

  const std::vector<std::size_t> hat{0, 1, 7};
  auto r = roc_of(u, s_star, VerifierSet::from_indices(u, hat));
  CHECK(r.tpr == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.fpr == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(r.youden_j == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.youden_j == r.tpr - r.fpr);
  CHECK(std::abs(r.s_ver - (r.s * r.tpr + (1 - r.s) * r.fpr)) <= 1e-12);

  CHECK(kind_of([&] { roc_of(u, VerifierSet::nothing(u), s_star); }) == ErrorKind::DegenerateGroundTruth);
  CHECK(kind_of([&] { roc_of(u, VerifierSet::everything(u), s_star); }) == ErrorKind::DegenerateGroundTruth);
}

TEST_CASE("s_ver identity holds for arbitrary verifier pairs") {
  const auto u = ResponseUniverse::dirichlet(12, 0.7, 3);
  for (unsigned a = 1; a < 4095; a += 97) {
    for (unsigned b = 0; b < 4096; b += 131) {
      std::vector<bool> ma(12), mb(12);
      for (int i = 0; i < 12; ++i) {
        ma[i] = (a >> i) & 1u;
        mb[i] = (b >> i) & 1u;
      }
      const auto s_star = VerifierSet::from_mask(u, ma);
      const auto s_hat = VerifierSet::from_mask(u, mb);
      const auto r = roc_of(u, s_star, s_hat);
      CHECK(std::abs(r.s_ver - (r.s * r.tpr + (1 - r.s) * r.fpr)) <= 1e-12);
    }
  }
}

TEST_CASE("verifier construction from ROC targets") {
  SUBCASE("perfect targets return S* itself") {
    const auto u = ResponseUniverse::uniform(20);
    const auto s_star = top_k(u, 6);
    const auto c = construct_verifier(u, s_star, 1.0, 0.3, 1e-9);
    CHECK(c.set == s_star);
  }
  SUBCASE("uninformative verifier takes half of each class") {
    const auto u = ResponseUniverse::uniform(8);
    const auto s_star = top_k(u, 4);
    const auto c = construct_verifier(u, s_star, 0.0, 0.5, 1e-9);
    CHECK(c.targets.tpr == doctest::Approx(0.5));
    CHECK(c.targets.fpr == doctest::Approx(0.5));
    CHECK(c.achieved.tpr == doctest::Approx(0.5));
    CHECK(c.achieved.fpr == doctest::Approx(0.5));
  }
  SUBCASE("uniform 20-point universe lands within one atom") {
    const auto u = ResponseUniverse::uniform(20);
    const auto s_star = top_k(u, 6);
    const auto c = construct_verifier(u, s_star, 0.5, 0.3, 0.05);
    CHECK(c.targets.tpr == doctest::Approx(0.65));
    CHECK(c.targets.fpr == doctest::Approx(0.15));
    CHECK(std::abs(c.achieved.youden_j - 0.5) <= 0.05);
    CHECK(std::abs(c.achieved.s_ver - 0.3) <= 0.05);
    // Deterministic: a second call picks the same atoms.
    CHECK(construct_verifier(u, s_star, 0.5, 0.3, 0.05).set == c.set);
  }
  SUBCASE("infeasible and too-coarse targets") {
    const auto u = ResponseUniverse::uniform(400);
    const auto s_star = top_k(u, 100);
    CHECK(kind_of([&] { construct_verifier(u, s_star, 0.68, 0.5, 0.01); }) == ErrorKind::Infeasible);
    const auto coarse = ResponseUniverse::uniform(5);
    const auto two = top_k(coarse, 2);
    try {
      construct_verifier(coarse, two, 0.5, 0.33, 1e-4);
      FAIL("expected a granularity error");
    } catch (const GranularityError& e) {
      CHECK(e.kind() == ErrorKind::Granularity);
      CHECK(std::isfinite(e.best_j()));
    }
  }
}

TEST_CASE("conditioning renormalises inside the set") {
  const ResponseUniverse u(kAbc, {0.5, 0.3, 0.2});
  const std::vector<std::string> bc{"b", "c"};
  const auto c = conditional(u, VerifierSet::from_ids(u, bc));
  REQUIRE(c.size() == 2);
  CHECK(c.id(0) == "b");
  CHECK(c.prob(0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(c.prob(1) == doctest::Approx(0.4).epsilon(1e-15));

  const auto full = conditional(u, VerifierSet::everything(u));
  CHECK(full.probs() == u.probs());

  const auto uni = ResponseUniverse::uniform(9);
  const std::vector<std::size_t> idx{1, 4, 8};
  const auto cu = conditional(uni, VerifierSet::from_indices(uni, idx));
  for (double p : cu.probs()) CHECK(p == doctest::Approx(1.0 / 3));

  CHECK(kind_of([&] { conditional(u, VerifierSet::nothing(u)); }) == ErrorKind::ZeroMass);
}

TEST_CASE("ranking, greedy fill and top-k") {
  const ResponseUniverse u({"a", "b", "c", "d"}, {0.2, 0.4, 0.2, 0.2});
  const auto order = probability_ranking(u);
  CHECK(order == std::vector<std::size_t>{1, 0, 2, 3});
  CHECK(greedy_fill(u, 0.6).indices() == std::vector<std::size_t>{0, 1});
  CHECK(top_k(u, 1).indices() == std::vector<std::size_t>{1});
  CHECK(kind_of([&] { top_k(u, 5); }) == ErrorKind::InvalidArgument);
}
