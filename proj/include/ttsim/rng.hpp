#pragma once

#include <array>
#include <cstdint>

namespace ttsim {

// Philox4x32-10 (Salmon et al., SC'11). Stateless: output is a pure function of counter and key,
// which is what lets episodes run in any order or on any thread and still reproduce bitwise.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

// Maps 64 random bits to the open interval (0,1) on a 52-bit midpoint lattice, so 1.0 is unreachable.
double open_unit(std::uint32_t hi, std::uint32_t lo) noexcept;

struct DrawUniforms {
  double response;  // selects Y by inverse CDF
  double accept;    // the u of the acceptance test
};

// All randomness of one episode. Draw n is block(counter = {n_lo, n_hi, episode_lo, episode_hi}, key = seed).
class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint64_t episode) noexcept;

  DrawUniforms draw(std::uint64_t n) const noexcept;
  // Side channel for selections that are not proposals (e.g. BoN's uniform pick); never collides with draw().
  double auxiliary(std::uint64_t n) const noexcept;

 private:
  Philox4x32::Key key_;
  std::uint32_t ep_lo_;
  std::uint32_t ep_hi_;
};

// Independent 64-bit seed for grid point `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace ttsim
