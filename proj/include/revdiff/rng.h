#ifndef REVDIFF_RNG_H_
#define REVDIFF_RNG_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

#include "revdiff/error.h"

namespace revdiff {

// Seeded draws built directly on mt19937_64 output, so sequences do not
// depend on the standard library's distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, n) by rejection sampling.
  std::size_t below(std::size_t n) {
    if (n == 0) throw InvalidArgument("SeededRng::below(0)");
    const auto bound = static_cast<std::uint64_t>(n);
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - kMax % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace revdiff

#endif  // REVDIFF_RNG_H_
