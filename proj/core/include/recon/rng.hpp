#pragma once

#include <cstdint>
#include <cmath>

namespace recon {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Splittable pseudo-random stream: xoshiro256++ whose state is a pure
/// function of (seed, key0, key1, key2).  Any worker can reconstruct the
/// stream for a given key tuple, so parallel runs are schedule-independent.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t key0 = 0,
                     std::uint64_t key1 = 0, std::uint64_t key2 = 0) {
    std::uint64_t h = seed;
    for (std::uint64_t key : {key0, key1, key2}) {
      h ^= detail::splitmix64_next(key) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      (void)detail::splitmix64_next(h);
      h = detail::splitmix64_next(h);
    }
    for (auto& word : state_) word = detail::splitmix64_next(h);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal deviate (Marsaglia polar method).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace recon
