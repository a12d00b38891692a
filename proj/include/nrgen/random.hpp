#pragma once

#include <cstdint>
#include <random>

#include "nrgen/numeric.hpp"

namespace nrgen {

/// Seeded deterministic generator. All randomness in a sampling session
/// flows through below(), which is exactly uniform for any bound.
///
/// The underlying engine is std::mt19937_64; the output sequence for a given
/// seed is fixed for a given build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). Rejection sampling over masked 64-bit
  /// blocks, so there is no modulo bias. Requires bound > 0.
  BigInt below(const BigInt& bound);

  /// Uniform integer in [0, bound) for machine-size bounds. Requires bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace nrgen
