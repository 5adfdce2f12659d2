#pragma once

#include <cstddef>
#include <span>

namespace pbench {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1 denominator)
};

/// Mean and sample SD with compensated summation. n >= 1; sd is 0 for n == 1.
SampleSummary summarize(std::span<const double> xs);

struct TTestResult {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double sd_a = 0.0;
  double sd_b = 0.0;
  double t = 0.0;
  int df = 0;
  double p = 1.0;  // two-sided
};

/// Independent two-sample Student's t-test with pooled variance,
/// t = (mean_a - mean_b) / (s_pooled * sqrt(1/n_a + 1/n_b)), df = n_a + n_b - 2.
/// Throws InvalidInput when either sample has fewer than 2 values, a value is
/// not finite, or the pooled variance is zero.
TTestResult ttest_independent(std::span<const double> a, std::span<const double> b);

}  // namespace pbench
