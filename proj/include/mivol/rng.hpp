#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mivol {

/// Seeded generator whose streams are identical across platforms: the
/// engine is mt19937_64 and the conversions below are written out instead of
/// relying on implementation-defined standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
    for (;;) {
      std::uint64_t x = engine_();
      if (x < limit) return x % bound;
    }
  }

  /// Standard normal by Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0;
    while (u1 <= 0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform direction on the unit sphere in R^dim.
  std::vector<double> unit_vector(int dim) {
    for (;;) {
      std::vector<double> v(dim);
      double norm2 = 0;
      for (auto& x : v) {
        x = normal();
        norm2 += x * x;
      }
      if (norm2 < 1e-24) continue;
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& x : v) x *= inv;
      return v;
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace mivol
