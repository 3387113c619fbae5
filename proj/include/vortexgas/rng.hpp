#pragma once

#include <cstdint>
#include <random>

namespace vortexgas {

/// SplitMix64 mixing step. Used to turn user seeds and stream ids into
/// well-spread engine seeds so that parallel chains get disjoint streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic random source. Identical seeds reproduce identical draws on
/// every platform; derived streams are independent for parallel work.
///
/// All integer draws go through next_u64/uniform_below rather than
/// std::uniform_int_distribution, whose output is implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) {
    std::uint64_t s = seed;
    engine_.seed(splitmix64(s));
  }

  /// Stream `stream_id` derived from `seed`; distinct ids give decorrelated
  /// engines suitable for parallel chains.
  static RandomSource stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s += stream_id * 0xD1B54A32D192ED03ULL;
    RandomSource r(0);
    r.engine_.seed(splitmix64(s));
    return r;
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased uniform integer in [0, n), n > 0. Masked rejection sampling.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t mask = ~0ULL >> __builtin_clzll(n - 1 | 1);
    std::uint64_t v;
    do {
      v = next_u64() & mask;
    } while (v >= n);
    return v;
  }

  int uniform_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(uniform_below(
                    static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vortexgas
