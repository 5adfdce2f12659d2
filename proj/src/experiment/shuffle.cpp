#include "pbench/experiment/shuffle.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "pbench/error.hpp"
#include "pbench/experiment/csv.hpp"

namespace pbench {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return x % bound;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t experiment_seed, std::uint64_t counter) noexcept {
  return splitmix64(experiment_seed ^ splitmix64(counter));
}

std::vector<std::size_t> randomize_trials(std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(ErrorKind::InvalidInput, "randomize_trials: empty trial table");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

std::vector<std::size_t> randomize_trials(const TrialTable& table, std::uint64_t seed) {
  return randomize_trials(table.size(), seed);
}

}  // namespace pbench
