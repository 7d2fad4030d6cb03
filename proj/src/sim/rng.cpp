#include <cmath>

#include "telegraph/sim.hpp"

namespace telegraph::sim {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// splitmix64 finalizer; a bijection, so distinct high stream words give
// distinct keys for the same seed.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

PathRng::PathRng(const RngSpec& spec, std::uint64_t path_index) {
  const std::uint64_t hi = spec.stream >> 32;
  const std::uint64_t k = hi == 0 ? spec.seed : spec.seed ^ mix64(hi);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  ctr_ = {0u, static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32),
          static_cast<std::uint32_t>(spec.stream)};
}

void PathRng::refill() {
  buf_ = philox4x32(ctr_, key_);
  ++ctr_[0];
  used_ = 0;
}

double PathRng::uniform() {
  if (used_ > 2) refill();
  const std::uint64_t bits = (static_cast<std::uint64_t>(buf_[used_]) << 32) | buf_[used_ + 1];
  used_ += 2;
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double PathRng::exponential(double rate) { return -std::log(uniform()) / rate; }

}  // namespace telegraph::sim
