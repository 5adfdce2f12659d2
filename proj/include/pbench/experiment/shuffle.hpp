#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pbench {

/// Identifier recorded next to every assignment so audits can tell which
/// generator produced it. Bump the suffix if the algorithm ever changes.
inline constexpr const char* kShuffleAlgorithm = "fisher-yates/mt19937_64/v1";

/// The one PRNG used for everything that must be reproducible. The engine's
/// output sequence is fixed by the C++ standard; the helpers below avoid the
/// implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (no cached second value).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-session seed derived from the experiment seed and the session counter.
std::uint64_t mix_seed(std::uint64_t experiment_seed, std::uint64_t counter) noexcept;

/// Fisher-Yates permutation of 0..n-1. Throws InvalidInput when n == 0.
std::vector<std::size_t> randomize_trials(std::size_t n, std::uint64_t seed);

class TrialTable;
std::vector<std::size_t> randomize_trials(const TrialTable& table, std::uint64_t seed);

}  // namespace pbench
