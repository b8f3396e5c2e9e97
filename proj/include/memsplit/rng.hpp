#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <vector>

namespace memsplit {

// splitmix64 output mixer. All derived seeds in the project go through this
// so that runs are reproducible across platforms (no std::random_device,
// no distribution objects with unspecified algorithms).
constexpr std::uint64_t kSeedGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Documented seed derivation: fold the parts into the root seed,
// h <- mix64(h ^ (part + gamma)), starting from h = mix64(root + gamma).
constexpr std::uint64_t seed_chain(std::uint64_t root,
                                   std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = mix64(root + kSeedGamma);
  for (std::uint64_t v : parts) h = mix64(h ^ (v + kSeedGamma));
  return h;
}

// Minimal deterministic PRNG (splitmix64 stream). Bit-stable output for a
// given seed regardless of platform or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kSeedGamma;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller with a cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n). Modulo bias is negligible for desk-scale n.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace memsplit
