#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace smatch {

// splitmix64 finalizer; the seed-derivation scheme for every randomized path
// (shuffle orders, per-repeat column samples, per-iteration minimal-match
// seeds). Pinned here so outputs are reproducible across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  return mix64(seed ^ mix64(a ^ mix64(b ^ mix64(c))));
}

/// Uniform integer in [0, n), n >= 1. Fixed multiply-shift reduction rather
/// than std::uniform_int_distribution, whose algorithm varies by stdlib.
inline std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_uniform(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// Standard normal deviates from pinned uniform bits (Box-Muller); avoids
/// std::normal_distribution for the same reproducibility reason.
class GaussianRng {
public:
  explicit GaussianRng(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = unit_open();
    const double u2 = unit_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

private:
  // uniform in (0, 1]
  double unit_open() { return ((rng_() >> 11) + 1.0) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace smatch
