#include "ttsim/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/special_functions/gamma.hpp>

#include "ttsim/errors.hpp"

namespace ttsim::oracle {

namespace {

// argmax_{nu in simplex} c.nu - lambda * sum nu^2/mu, over atoms with mu > 0.
std::vector<double> lagrangian_point(std::span<const double> mu, const std::vector<double>& c, double lambda) {
  auto total = [&](double tau) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) acc += mu[i] * std::max(0.0, c[i] - tau) / (2.0 * lambda);
    return acc;
  };
  double hi = *std::max_element(c.begin(), c.end());
  double lo = *std::min_element(c.begin(), c.end()) - 2.0 * lambda - 1.0;
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (total(mid) > 1.0 ? lo : hi) = mid;
  }
  std::vector<double> nu(mu.size());
  double z = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    nu[i] = mu[i] * std::max(0.0, c[i] - lo) / (2.0 * lambda);
    z += nu[i];
  }
  for (double& x : nu) x /= z;
  return nu;
}

// sum (nu - mu)^2 / mu, which equals sum nu^2/mu - 1 without the cancellation.
double chi2_of(std::span<const double> mu, const std::vector<double>& nu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) acc += (nu[i] - mu[i]) * (nu[i] - mu[i]) / mu[i];
  return acc;
}

}  // namespace

ChiBallOptimum maximize_set_mass(std::span<const double> mu_all, const std::vector<bool>& in_set, double beta) {
  if (mu_all.size() != in_set.size()) throw Error(ErrorKind::InvalidArgument, "mask and measure differ in length");
  std::vector<double> mu;
  std::vector<double> c;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < mu_all.size(); ++i) {
    if (mu_all[i] <= 0.0) continue;
    mu.push_back(mu_all[i]);
    c.push_back(in_set[i] ? 1.0 : 0.0);
    where.push_back(i);
  }
  const double radius = beta - 1.0;

  auto finish = [&](const std::vector<double>& nu, double lambda) {
    ChiBallOptimum out;
    out.lambda = lambda;
    out.chi2 = chi2_of(mu, nu);
    out.nu.assign(mu_all.size(), 0.0);
    for (std::size_t k = 0; k < nu.size(); ++k) {
      out.nu[where[k]] = nu[k];
      out.set_mass += c[k] * nu[k];
    }
    return out;
  };

  // As lambda -> 0 the maximiser spreads over the set in proportion to mu. If that is already
  // inside the ball the constraint is slack and the whole set can be reached.
  double set_mu = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) set_mu += c[k] * mu[k];
  if (set_mu > 0.0) {
    std::vector<double> conditional(mu.size());
    for (std::size_t k = 0; k < mu.size(); ++k) conditional[k] = c[k] * mu[k] / set_mu;
    if (chi2_of(mu, conditional) <= radius) return finish(conditional, 0.0);
  }

  // chi2 of the Lagrangian point decreases in lambda; find where it meets the radius.
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (chi2_of(mu, lagrangian_point(mu, c, std::exp(mid))) > radius ? lo : hi) = mid;
  }
  return finish(lagrangian_point(mu, c, std::exp(hi)), std::exp(hi));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorKind::InvalidArgument, "distributions differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return acc / 2.0;
}

std::vector<double> enumerate_bon(const ResponseUniverse& u, const VerifierSet& s_hat, std::int64_t n,
                                  BonInspection inspection) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "batch size must be >= 0");
  std::vector<std::size_t> atoms;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u.prob(i) > 0.0) atoms.push_back(i);
  const auto len = static_cast<std::size_t>(n) + 1;
  const std::size_t inspected = inspection == BonInspection::AllResponses ? len : len - 1;

  std::vector<double> nu(u.size(), 0.0);
  std::vector<std::size_t> digit(len, 0);
  while (true) {
    double p = 1.0;
    std::size_t verified = 0;
    for (std::size_t pos = 0; pos < len; ++pos) {
      p *= u.prob(atoms[digit[pos]]);
      if (pos < inspected && s_hat.contains(atoms[digit[pos]])) ++verified;
    }
    for (std::size_t pos = 0; pos < len; ++pos) {
      const std::size_t y = atoms[digit[pos]];
      if (verified > 0) {
        if (pos < inspected && s_hat.contains(y)) nu[y] += p / static_cast<double>(verified);
      } else {
        nu[y] += p / static_cast<double>(len);
      }
    }
    std::size_t pos = 0;
    while (pos < len && ++digit[pos] == atoms.size()) digit[pos++] = 0;
    if (pos == len) break;
  }
  return nu;
}

std::vector<double> enumerate_brs(const ResponseUniverse& u, const VerifierSet& s_hat, double s_eff, double beta,
                                  std::int64_t n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "batch size must be >= 0");
  // Acceptance probability off the verifier set, written out from the density ratios directly.
  const double m = s_eff + std::sqrt(s_eff * (1.0 - s_eff) * (beta - 1.0));
  const double on = std::min(1.0 / s_eff, m / s_eff);
  const double off = s_eff >= 1.0 ? 0.0 : std::max(0.0, (1.0 - m) / (1.0 - s_eff));
  const double envelope = std::max(on, off);

  std::vector<double> nu(u.size(), 0.0);
  std::function<void(std::int64_t, double)> walk = [&](std::int64_t step, double reach) {
    if (step == n) {
      for (std::size_t y = 0; y < u.size(); ++y) nu[y] += reach * u.prob(y);
      return;
    }
    for (std::size_t y = 0; y < u.size(); ++y) {
      if (u.prob(y) == 0.0) continue;
      const double accept = s_hat.contains(y) ? 1.0 : std::min(1.0, off / envelope);
      nu[y] += reach * u.prob(y) * accept;
      if (accept < 1.0) walk(step + 1, reach * u.prob(y) * (1.0 - accept));
    }
  };
  walk(0, 1.0);
  return nu;
}

double gof_p_value(std::span<const std::uint64_t> counts, std::span<const double> probs) {
  if (counts.size() != probs.size()) throw Error(ErrorKind::InvalidArgument, "counts and probs differ in length");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] <= 0.0) {
      if (counts[i] > 0) return 0.0;
      continue;
    }
    const double expected = total * probs[i];
    const double d = static_cast<double>(counts[i]) - expected;
    stat += d * d / expected;
    ++cells;
  }
  if (cells <= 1) return 1.0;
  return boost::math::gamma_q(0.5 * (cells - 1), 0.5 * stat);
}

}  // namespace ttsim::oracle
