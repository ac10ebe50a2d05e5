#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nmd/types.hpp"

namespace nmd {

/// Deterministic random source used wherever the library needs randomness.
/// The bit stream is std::mt19937_64; uniforms take the top 53 bits, gaussians
/// go through a Box-Muller transform. Both mappings are spelled out here
/// because the std::*_distribution adaptors are implementation-defined and
/// would break seed reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Standard normal deviate; one half of each Box-Muller pair is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = unit();
    while (u1 == 0.0) u1 = unit();
    const double u2 = unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nmd
