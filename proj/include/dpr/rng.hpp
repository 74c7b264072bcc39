#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dpr {

// splitmix64 finalizer, used to derive well-separated per-trajectory seeds
// from a master seed. Trajectory i always gets the same stream regardless of
// execution order, so batches are reproducible and parallel-safe.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic random stream. Samplers are implemented on top of the raw
// 64-bit output so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on [0, 1), bounded away from 1 is not needed; log(1-u) is safe.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller with a cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(splitmix64(master_seed ^ splitmix64(index + 1)));
}

}  // namespace dpr
