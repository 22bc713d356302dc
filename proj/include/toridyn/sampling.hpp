#pragma once

#include <cstdint>

#include "toridyn/vec.hpp"

namespace toridyn {

/// splitmix64, used to derive deterministic stream offsets from a seed.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic low-discrepancy sequence in [0,1)^2 (additive recurrence
/// with the plastic-number constants), offset by a seed.
class QuasiRandom2D {
 public:
  explicit QuasiRandom2D(uint64_t seed) {
    constexpr double kInv = 1.0 / 18446744073709551616.0;  // 2^-64
    x_ = static_cast<double>(mix64(seed)) * kInv;
    y_ = static_cast<double>(mix64(seed ^ 0xda3e39cb94b95bdbULL)) * kInv;
  }

  Vec2 next() {
    // 1/p and 1/p^2 for the plastic number p.
    constexpr double a1 = 0.7548776662466927;
    constexpr double a2 = 0.5698402909980532;
    x_ = frac(x_ + a1);
    y_ = frac(y_ + a2);
    return Vec2(x_, y_);
  }

 private:
  double x_;
  double y_;
};

}  // namespace toridyn
