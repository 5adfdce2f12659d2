#pragma once

#include <cstddef>
#include <span>

namespace pbench {

/// Slope/intercept fit with inference on the slope. For through-origin fits
/// the intercept fields are zero. When the residual is exactly zero the
/// standard error is zero and t is +/-inf (p = 0), or 0 (p = 1) for a zero slope.
struct StatResult {
  std::size_t n = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double t = 0.0;  // slope / slope_stderr
  int df = 0;
  double p = 1.0;  // two-sided, for the slope
  double rss = 0.0;
};

/// Ordinary least squares y = intercept + slope * x, df = n - 2.
/// Throws InvalidInput for n < 3, mismatched lengths, non-finite values, or
/// constant x (singular design).
StatResult fit_line(std::span<const double> x, std::span<const double> y);

/// y = slope * x, df = n - 1. Throws for n < 2 or all-zero x.
StatResult fit_through_origin(std::span<const double> x, std::span<const double> y);

/// Elevation-versus-year trend: fit_line with the same preconditions.
inline StatResult fit_trend(std::span<const double> years, std::span<const double> elevations) {
  return fit_line(years, elevations);
}

}  // namespace pbench
