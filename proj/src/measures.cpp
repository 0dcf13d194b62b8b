#include "ttsim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>

#include "ttsim/errors.hpp"

namespace ttsim {

namespace {

constexpr double kSumTolerance = 1e-12;

std::vector<std::string> generated_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("y" + std::to_string(i));
  return ids;
}

std::vector<double> normalized(std::vector<double> w) {
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0) || !std::isfinite(total)) throw Error(ErrorKind::ZeroMass, "generator produced no mass");
  for (double& x : w) x /= total;
  return w;
}

// Index of the prefix (0..order.size()) whose cumulative mass lies closest to target.
std::size_t closest_prefix(const ResponseUniverse& u, const std::vector<std::size_t>& order, double target) {
  std::size_t best = 0;
  double best_gap = std::abs(target);
  double cum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cum += u.prob(order[k]);
    double gap = std::abs(cum - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = k + 1;
    }
  }
  return best;
}

// First-fit decreasing toward target: take each atom (most probable first) that does not overshoot,
// then at most one more atom if crossing the target lands closer to it.
void greedy_toward(const ResponseUniverse& u, const std::vector<std::size_t>& order, double target,
                   std::vector<bool>& mask) {
  double cum = 0.0;
  for (std::size_t i : order) {
    if (cum + u.prob(i) <= target) {
      cum += u.prob(i);
      mask[i] = true;
    }
  }
  std::size_t best = order.size();
  double best_gap = target - cum;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (mask[i]) continue;
    if (const double gap = cum + u.prob(i) - target; gap < best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  if (best < order.size()) mask[order[best]] = true;
}

void require_same_universe(const ResponseUniverse& u, const VerifierSet& set) {
  if (set.universe_size() != u.size())
    throw Error(ErrorKind::Membership, "verifier set was built for a universe of " +
                                           std::to_string(set.universe_size()) + " atoms, not " +
                                           std::to_string(u.size()));
}

}  // namespace

ResponseUniverse::ResponseUniverse(std::vector<std::string> ids, std::vector<double> probs)
    : ids_(std::move(ids)), probs_(std::move(probs)) {
  if (ids_.empty()) throw Error(ErrorKind::InvalidArgument, "universe must have at least one atom");
  if (ids_.size() != probs_.size())
    throw Error(ErrorKind::InvalidArgument, "ids and probs differ in length (" + std::to_string(ids_.size()) +
                                                " vs " + std::to_string(probs_.size()) + ")");
  double total = 0.0;
  cdf_.reserve(probs_.size());
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0)
      throw Error(ErrorKind::InvalidArgument, "probability of '" + ids_[i] + "' is negative or not finite");
    total += p;
    cdf_.push_back(total);
  }
  if (std::abs(total - 1.0) > kSumTolerance)
    throw Error(ErrorKind::InvalidArgument, "probabilities must sum to 1 (got " + std::to_string(total) + ")");
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i].empty()) throw Error(ErrorKind::InvalidArgument, "empty response id");
    if (!index_.emplace(ids_[i], i).second) throw Error(ErrorKind::InvalidArgument, "duplicate id '" + ids_[i] + "'");
  }
}

ResponseUniverse ResponseUniverse::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "uniform universe needs n >= 1");
  return ResponseUniverse(generated_ids(n), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ResponseUniverse ResponseUniverse::zipf(std::size_t n, double exponent) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "zipf universe needs n >= 1");
  if (!std::isfinite(exponent) || exponent < 0.0)
    throw Error(ErrorKind::InvalidArgument, "zipf exponent must be finite and >= 0");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(static_cast<double>(i + 1), -exponent);
  return ResponseUniverse(generated_ids(n), normalized(std::move(w)));
}

ResponseUniverse ResponseUniverse::dirichlet(std::size_t n, double concentration, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "dirichlet universe needs n >= 1");
  if (!std::isfinite(concentration) || concentration <= 0.0)
    throw Error(ErrorKind::InvalidArgument, "dirichlet concentration must be > 0");
  boost::random::mt19937_64 engine(seed);
  boost::random::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> w(n);
  for (double& x : w) x = gamma(engine);
  return ResponseUniverse(generated_ids(n), normalized(std::move(w)));
}

std::optional<std::size_t> ResponseUniverse::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ResponseUniverse::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) throw Error(ErrorKind::Membership, "unknown response id '" + std::string(id) + "'");
  return *i;
}

std::size_t ResponseUniverse::sample(double u) const noexcept {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it != cdf_.end()) return static_cast<std::size_t>(it - cdf_.begin());
  // u landed above the rounded total: take the last atom that carries mass.
  std::size_t i = probs_.size() - 1;
  while (i > 0 && probs_[i] == 0.0) --i;
  return i;
}

VerifierSet VerifierSet::from_mask(const ResponseUniverse& u, std::vector<bool> mask) {
  if (mask.size() != u.size())
    throw Error(ErrorKind::Membership, "mask length " + std::to_string(mask.size()) + " does not match universe size " +
                                           std::to_string(u.size()));
  VerifierSet s;
  s.mask_ = std::move(mask);
  double outside = 0.0;
  for (std::size_t i = 0; i < s.mask_.size(); ++i) (s.mask_[i] ? s.mass_ : outside) += u.prob(i);
  // Covering every atom of positive mass means mass 1 exactly, not a rounded 1 - 1e-16.
  s.mass_ = outside == 0.0 ? 1.0 : std::min(1.0, s.mass_);
  return s;
}

VerifierSet VerifierSet::from_indices(const ResponseUniverse& u, std::span<const std::size_t> indices) {
  std::vector<bool> mask(u.size(), false);
  for (std::size_t i : indices) {
    if (i >= u.size()) throw Error(ErrorKind::Membership, "index " + std::to_string(i) + " outside the universe");
    mask[i] = true;
  }
  return from_mask(u, std::move(mask));
}

VerifierSet VerifierSet::from_ids(const ResponseUniverse& u, std::span<const std::string> ids) {
  std::vector<bool> mask(u.size(), false);
  for (const auto& id : ids) mask[u.index_of(id)] = true;
  return from_mask(u, std::move(mask));
}

VerifierSet VerifierSet::everything(const ResponseUniverse& u) { return from_mask(u, std::vector<bool>(u.size(), true)); }

VerifierSet VerifierSet::nothing(const ResponseUniverse& u) { return from_mask(u, std::vector<bool>(u.size(), false)); }

std::size_t VerifierSet::count() const noexcept {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

std::vector<std::size_t> VerifierSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(i);
  return out;
}

std::vector<std::string> VerifierSet::member_ids(const ResponseUniverse& u) const {
  require_same_universe(u, *this);
  std::vector<std::string> out;
  for (std::size_t i : indices()) out.push_back(u.id(i));
  return out;
}

VerifierSet VerifierSet::complement(const ResponseUniverse& u) const {
  require_same_universe(u, *this);
  std::vector<bool> flipped(mask_.size());
  for (std::size_t i = 0; i < mask_.size(); ++i) flipped[i] = !mask_[i];
  return from_mask(u, std::move(flipped));
}

double mass(const ResponseUniverse& u, const VerifierSet& set) {
  require_same_universe(u, set);
  return set.mass();
}

RocProfile roc_of(const ResponseUniverse& u, const VerifierSet& s_star, const VerifierSet& s_hat) {
  require_same_universe(u, s_star);
  require_same_universe(u, s_hat);
  const double s = s_star.mass();
  if (!(s > 0.0) || !(s < 1.0))
    throw Error(ErrorKind::DegenerateGroundTruth, "ground-truth mass must lie strictly between 0 and 1");
  double hit = 0.0, false_alarm = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!s_hat.contains(i)) continue;
    (s_star.contains(i) ? hit : false_alarm) += u.prob(i);
  }
  RocProfile r;
  r.tpr = std::clamp(hit / s, 0.0, 1.0);
  r.fpr = std::clamp(false_alarm / (1.0 - s), 0.0, 1.0);
  r.youden_j = r.tpr - r.fpr;
  r.s = s;
  r.s_ver = s_hat.mass();
  return r;
}

RocTargets roc_targets(double s, double target_j, double target_s_ver) {
  if (!(s > 0.0) || !(s < 1.0))
    throw Error(ErrorKind::DegenerateGroundTruth, "ground-truth mass must lie strictly between 0 and 1");
  RocTargets t;
  t.tpr = target_s_ver + (1.0 - s) * target_j;
  t.fpr = target_s_ver - s * target_j;
  constexpr double slack = 1e-12;
  auto outside = [](double x) { return x < -slack || x > 1.0 + slack || !std::isfinite(x); };
  if (outside(t.tpr) || outside(t.fpr)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "targets J=%.6g, s_ver=%.6g need tpr*=%.6g, fpr*=%.6g (both must be in [0,1])",
                  target_j, target_s_ver, t.tpr, t.fpr);
    throw Error(ErrorKind::Infeasible, buf);
  }
  t.tpr = std::clamp(t.tpr, 0.0, 1.0);
  t.fpr = std::clamp(t.fpr, 0.0, 1.0);
  return t;
}

std::vector<std::size_t> probability_ranking(const ResponseUniverse& u) {
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u.prob(a) > u.prob(b); });
  return order;
}

VerifierConstruction construct_verifier(const ResponseUniverse& u, const VerifierSet& s_star, double target_j,
                                        double target_s_ver, double tol) {
  require_same_universe(u, s_star);
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const double s = s_star.mass();
  const RocTargets targets = roc_targets(s, target_j, target_s_ver);

  std::vector<std::size_t> inside, outside;
  for (std::size_t i : probability_ranking(u)) (s_star.contains(i) ? inside : outside).push_back(i);

  std::vector<bool> mask(u.size(), false);
  greedy_toward(u, inside, s * targets.tpr, mask);
  greedy_toward(u, outside, (1.0 - s) * targets.fpr, mask);

  VerifierConstruction result{VerifierSet::from_mask(u, std::move(mask)), {}, targets};
  result.achieved = roc_of(u, s_star, result.set);
  if (std::abs(result.achieved.youden_j - target_j) > tol || std::abs(result.achieved.s_ver - target_s_ver) > tol)
    throw GranularityError(result.achieved.youden_j, result.achieved.s_ver, tol);
  return result;
}

ResponseUniverse conditional(const ResponseUniverse& u, const VerifierSet& set) {
  require_same_universe(u, set);
  if (!(set.mass() > 0.0)) throw Error(ErrorKind::ZeroMass, "cannot condition on a set of zero mass");
  // Recompute the normaliser from the members so the result sums to 1 as tightly as possible.
  double total = 0.0;
  for (std::size_t i : set.indices()) total += u.prob(i);
  std::vector<std::string> ids;
  std::vector<double> probs;
  for (std::size_t i : set.indices()) {
    ids.push_back(u.id(i));
    probs.push_back(u.prob(i) / total);
  }
  return ResponseUniverse(std::move(ids), std::move(probs));
}

VerifierSet greedy_fill(const ResponseUniverse& u, double target_mass) {
  if (!(target_mass >= 0.0 && target_mass <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "target mass must lie in [0,1]");
  auto order = probability_ranking(u);
  std::size_t k = closest_prefix(u, order, target_mass);
  order.resize(k);
  return VerifierSet::from_indices(u, order);
}

VerifierSet top_k(const ResponseUniverse& u, std::size_t k) {
  if (k > u.size()) throw Error(ErrorKind::InvalidArgument, "top-k larger than the universe");
  auto order = probability_ranking(u);
  order.resize(k);
  return VerifierSet::from_indices(u, order);
}

}  // namespace ttsim
