#pragma once

#include <cstdint>
#include <random>

namespace lrsolve {

/**
 * Deterministic uniform generator built directly on mt19937_64 output words.
 * std::uniform_real_distribution is implementation-defined, so reproducible
 * sequences (same seed, same values on any toolchain) need the mapping done
 * by hand: 53 high bits -> [0, 1).
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lrsolve
