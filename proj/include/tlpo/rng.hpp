#pragma once

// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <span>
#include <vector>

namespace tlpo {

/// Deterministic PRNG with a fully specified update rule (splitmix64).
/// The standard library distributions are deliberately avoided: their output
/// is implementation-defined, and reports and checkpoints must be
/// byte-identical for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  /// Uniform integer in [0, n), unbiased via rejection. n must be > 0.
  std::uint64_t next_below(std::uint64_t n);

  /// Derives an independent stream seed from (a, b). Used to give every
  /// (step, prompt, purpose) tuple its own substream so that resuming a run
  /// at step s reproduces the original randomness exactly.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c);

 private:
  std::uint64_t state_;
};

/// Multinomial draw from unnormalized non-negative weights; returns an index.
std::size_t sample_index(Rng& rng, std::span<const double> weights);

}  // namespace tlpo
