#pragma once

#include "spirec/core.hpp"

#include <cstdint>
#include <numbers>
#include <random>

namespace spirec {

/// Deterministic random source. Gaussian draws use Box-Muller on top of
/// raw mt19937_64 output instead of std::normal_distribution, whose
/// sequence is implementation-defined; this keeps seeded runs bit-identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vector normal_vector(Index n) {
    Vector z(n);
    for (Index i = 0; i < n; ++i) z[i] = normal();
    return z;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t uniform_index(std::uint64_t bound) { return engine_() % bound; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace spirec
