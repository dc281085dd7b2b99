#pragma once

#include <cstdint>
#include <cmath>

namespace acp {

// 64-bit finalizer used both as the generator step and to derive replica
// substreams. Constants are the splitmix64 ones (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic counter-based stream. All simulation randomness flows
// through this class so that runs are bit-reproducible given a seed,
// independently of platform or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Substream for replica r of an experiment seeded with `seed`. Replicas
  // derived this way are independent regardless of scheduling order.
  static Rng substream(std::uint64_t seed, std::uint64_t replica) {
    return Rng(mix64(seed + 0x9e3779b97f4a7c15ULL * (replica + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  // Number of failures before the first success when each trial fails with
  // probability q, i.e. P(i) = q^i (1 - q). Inverse transform.
  std::uint64_t geometric_failures(double q) {
    if (q <= 0.0) return 0;
    return static_cast<std::uint64_t>(std::log(uniform_pos()) / std::log(q));
  }

  // Uniform integer in [0, n), n >= 1. Multiply-shift; bias is below 2^-64.
  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace acp
