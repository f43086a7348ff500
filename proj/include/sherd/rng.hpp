#pragma once

#include <cstdint>
#include <random>

namespace sherd {

// mt19937_64 output is fixed by the standard, unlike the distributions, so
// uniform variates are derived here to keep seeded results portable.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

private:
  std::mt19937_64 engine_;
};

} // namespace sherd
