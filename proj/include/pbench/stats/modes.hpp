#pragma once

#include <span>
#include <vector>

namespace pbench {

/// Gaussian kernel density estimate at x (integrates to 1 over x).
double kde_density(std::span<const double> xs, double bandwidth, double x);

struct DensityPeak {
  double x = 0.0;
  double density = 0.0;
};

/// Strict local maxima of the Gaussian KDE of `xs`, sorted by density
/// (descending, ties by position). Candidates come from a scan at
/// bandwidth / 20 spacing and are polished to the exact stationary point by
/// mean-shift iteration. Throws InvalidInput for empty input, non-finite
/// values, or a non-positive bandwidth.
std::vector<DensityPeak> composition_modes(std::span<const double> xs, double bandwidth);

}  // namespace pbench
