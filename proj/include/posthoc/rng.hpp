// Seeded random streams for deterministic, parallel Monte Carlo.
//
// A stream is addressed by (master_seed, stream_index). The xoshiro256++
// state is derived from that pair with splitmix64-style mixing, so distinct
// stream indices give statistically independent streams and any stream can
// be reconstructed from its address alone. Trial code derives per-purpose
// sub-streams (type draw, universe draw, selection draw) from
// (context, trial_index, purpose), which is what makes trials embarrassingly
// parallel with reproducible results.

#pragma once

#include <cmath>
#include <cstdint>

namespace posthoc {

struct RngSeed {
  std::uint64_t master_seed = 42;
  std::uint64_t stream_index = 0;
};

// splitmix64 finalizer (Vigna). Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Purpose tags for per-trial sub-streams.
enum class StreamPurpose : std::uint64_t {
  theory_type = 1,
  universe = 2,
  selection = 3,
};

// Collapse (context, trial, purpose) into a single stream index. Each field
// is folded in through its own mix round, so the combine is position-aware:
// swapping context and trial lands on a different stream.
inline std::uint64_t derive_stream(std::uint64_t context, std::uint64_t trial,
                                   std::uint64_t purpose) {
  std::uint64_t h = mix64(context + 0x9E3779B97F4A7C15ULL);
  h = mix64(h + trial);
  return mix64(h + purpose);
}

inline std::uint64_t derive_stream(std::uint64_t context, std::uint64_t trial,
                                   StreamPurpose purpose) {
  return derive_stream(context, trial, static_cast<std::uint64_t>(purpose));
}

// xoshiro256++ (Blackman & Vigna, public domain reference constants).
class RngStream {
 public:
  explicit RngStream(RngSeed seed) {
    std::uint64_t x = mix64(seed.master_seed) ^ mix64(mix64(seed.stream_index) + 0x632BE59BD9B4E019ULL);
    for (auto& word : state_) {
      x = mix64(x);
      word = x;
    }
  }

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : RngStream(RngSeed{master_seed, stream_index}) {}

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform01_open_low() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace posthoc
