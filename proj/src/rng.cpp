#include "ttsim/rng.hpp"

namespace ttsim {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

inline std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
inline std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, ctr[0], lo0, hi0);
    mulhilo(kMul1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

DrawStream::DrawStream(std::uint64_t seed, std::uint64_t episode) noexcept
    : key_{lo32(seed), hi32(seed)}, ep_lo_(lo32(episode)), ep_hi_(hi32(episode)) {}

DrawUniforms DrawStream::draw(std::uint64_t n) const noexcept {
  const auto out = Philox4x32::block({lo32(n), hi32(n), ep_lo_, ep_hi_}, key_);
  return {open_unit(out[0], out[1]), open_unit(out[2], out[3])};
}

double DrawStream::auxiliary(std::uint64_t n) const noexcept {
  // Proposal indices never reach 2^63, so setting the top counter bit gives a disjoint stream.
  const auto out = Philox4x32::block({lo32(n), hi32(n) | 0x80000000u, ep_lo_, ep_hi_}, key_);
  return open_unit(out[0], out[1]);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  const auto out = Philox4x32::block({lo32(index), hi32(index), 0xA5A5A5A5u, 0x5EED5EEDu}, {lo32(master), hi32(master)});
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace ttsim
