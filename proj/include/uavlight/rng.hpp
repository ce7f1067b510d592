#pragma once

#include <cstdint>
#include <random>

namespace uavlight {

// Deterministic random source. The engine is the standard mt19937_64, whose
// output stream is fully pinned by the standard; the distributions are our
// own because library distributions differ between standard libraries.
class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller, one value per call (no cached spare).
  double gaussian();

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

private:
  std::mt19937_64 engine_;
};

}  // namespace uavlight
