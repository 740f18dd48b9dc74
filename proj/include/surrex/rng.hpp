#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace surrex::rng {

// Deterministic random streams. Every randomized operation takes an explicit
// 64-bit seed and derives private substreams from it with derive_seed, so a
// run is reproducible bit-for-bit regardless of evaluation order. The
// standard <random> distributions are implementation-defined and are not used
// anywhere; generation is pinned here.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Substream families. Two streams with different tags never collide even
/// when they share a base seed.
enum class StreamTag : std::uint64_t {
  half_moons = 1,
  split = 2,
  forest_tree = 3,
  global_normal = 4,
  ball = 5,
  boundary_step = 6,
  explain_sample = 7,
  explain_boundary = 8,
  fidelity_eval = 9,
  sweep = 10,
  instance_explain = 11,
  instance_eval = 12,
  selection = 13,
  grid_search = 14,
  dataset = 15,
};

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) {
  std::uint64_t h = mix64(base + kGolden);
  h = mix64(h + kGolden * (stream + 1));
  h = mix64(h + kGolden * (index + 1));
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t base, StreamTag tag, std::uint64_t index = 0) {
  return derive_seed(base, static_cast<std::uint64_t>(tag), index);
}

/// xoshiro256++ generator seeded through splitmix64.
class Stream {
public:
  explicit Stream(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += kGolden;
      word = mix64(s);
    }
  }

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

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_unit_pos() { return 1.0 - next_unit(); }

  /// Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Standard normal via Box-Muller; the paired value is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = next_unit_pos();
    const double v = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * 3.14159265358979323846 * v;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniform integer in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace surrex::rng
