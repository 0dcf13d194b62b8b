#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ttsim {

// The proposal measure mu over a finite, ordered set of response ids.
class ResponseUniverse {
 public:
  ResponseUniverse(std::vector<std::string> ids, std::vector<double> probs);

  static ResponseUniverse uniform(std::size_t n);
  // p_i proportional to (i+1)^-exponent, ids in rank order.
  static ResponseUniverse zipf(std::size_t n, double exponent);
  // Symmetric Dirichlet(concentration) draw, seeded for reproducibility.
  static ResponseUniverse dirichlet(std::size_t n, double concentration, std::uint64_t seed);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  double prob(std::size_t i) const { return probs_.at(i); }

  std::optional<std::size_t> find(std::string_view id) const;
  // Like find() but throws a membership error for unknown ids.
  std::size_t index_of(std::string_view id) const;

  // Inverse-CDF draw over the fixed id order: first index whose cumulative mass exceeds u.
  std::size_t sample(double u) const noexcept;

 private:
  std::vector<std::string> ids_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
  std::unordered_map<std::string, std::size_t> index_;
};

// A subset of a universe (S* or S-hat) stored as a membership mask with its cached mass.
class VerifierSet {
 public:
  VerifierSet() = default;

  static VerifierSet from_mask(const ResponseUniverse& u, std::vector<bool> mask);
  static VerifierSet from_indices(const ResponseUniverse& u, std::span<const std::size_t> indices);
  static VerifierSet from_ids(const ResponseUniverse& u, std::span<const std::string> ids);
  static VerifierSet everything(const ResponseUniverse& u);
  static VerifierSet nothing(const ResponseUniverse& u);

  bool contains(std::size_t i) const { return i < mask_.size() && mask_[i]; }
  std::size_t universe_size() const noexcept { return mask_.size(); }
  std::size_t count() const noexcept;
  double mass() const noexcept { return mass_; }
  const std::vector<bool>& mask() const noexcept { return mask_; }
  std::vector<std::size_t> indices() const;
  std::vector<std::string> member_ids(const ResponseUniverse& u) const;

  VerifierSet complement(const ResponseUniverse& u) const;

  friend bool operator==(const VerifierSet& a, const VerifierSet& b) { return a.mask_ == b.mask_; }

 private:
  std::vector<bool> mask_;
  double mass_ = 0.0;
};

struct RocProfile {
  double tpr = 0.0;
  double fpr = 0.0;
  double youden_j = 0.0;
  double s = 0.0;      // mass of S*
  double s_ver = 0.0;  // mass of S-hat
};

double mass(const ResponseUniverse& u, const VerifierSet& set);

RocProfile roc_of(const ResponseUniverse& u, const VerifierSet& s_star, const VerifierSet& s_hat);

struct RocTargets {
  double tpr = 0.0;
  double fpr = 0.0;
};

// Solves for (tpr*, fpr*) from (J, s_ver) and the ground-truth mass; throws if either leaves [0,1].
RocTargets roc_targets(double s, double target_j, double target_s_ver);

struct VerifierConstruction {
  VerifierSet set;
  RocProfile achieved;
  RocTargets targets;
};

VerifierConstruction construct_verifier(const ResponseUniverse& u, const VerifierSet& s_star, double target_j,
                                        double target_s_ver, double tol);

ResponseUniverse conditional(const ResponseUniverse& u, const VerifierSet& set);

// Atoms ordered by probability descending, ties broken by id order.
std::vector<std::size_t> probability_ranking(const ResponseUniverse& u);

// Greedy prefix of the probability ranking whose mass is closest to target (ties favour the shorter prefix).
VerifierSet greedy_fill(const ResponseUniverse& u, double target_mass);

// The k most probable atoms.
VerifierSet top_k(const ResponseUniverse& u, std::size_t k);

}  // namespace ttsim
