#pragma once

#include <cstdint>
#include <random>

namespace neardgd {

// Every random draw in the library goes through this wrapper so results are
// reproducible across standard libraries: the engine is std::mt19937_64 (fully
// specified by the standard) and doubles are built from its top 53 bits
// instead of std::uniform_real_distribution, whose algorithm is unspecified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

  /// Uniform in the open interval (lo, hi).
  double uniform_open(double lo, double hi) {
    for (;;) {
      double u = canonical();
      if (u > 0.0) return lo + (hi - lo) * u;
    }
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace neardgd
