#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rwre {

// Stateless 64-bit finalizer (splitmix64 increment + mix). Used only to derive
// sub-stream seeds from (master, index) pairs, never as a running generator.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic seed for sub-stream (a, b) of a master seed. Distinct (a, b)
// give independent-quality streams regardless of the order they are created.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return mix64(mix64(mix64(master) ^ (a + 0x9E3779B97F4A7C15ull)) ^
               (b + 0xD1B54A32D192ED03ull));
}

// Bijection from signed site index to an unsigned stream key.
constexpr std::uint64_t zigzag(long long x) {
  return x >= 0 ? 2ull * static_cast<std::uint64_t>(x)
                : 2ull * static_cast<std::uint64_t>(-(x + 1)) + 1ull;
}

// One seeded random stream. All distributions are drawn through the methods
// below so that a given seed yields the same sequence on every platform.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform on the open interval (0,1); endpoints are never returned.
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Number of failures before the first success, success probability w in
  // (0,1]. Exact inversion of the geometric CDF.
  long long geometric(double w) {
    const double d = std::log1p(-w);  // -inf when w == 1, giving 0 below
    return static_cast<long long>(std::log(uniform()) / d);
  }

  // Standard normal via the polar method.
  double normal() {
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

  // Gamma(shape, 1), shape > 0. Marsaglia-Tsang squeeze for shape >= 1,
  // boosted by U^(1/shape) below 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Beta(a, b) via two gammas, clamped into the open unit interval.
  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    double w = x / (x + y);
    if (w <= 0.0) w = 1e-300;
    if (w >= 1.0) w = 1.0 - 1e-16;
    return w;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rwre
