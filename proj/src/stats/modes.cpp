#include "pbench/stats/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pbench/error.hpp"

namespace pbench {

double kde_density(std::span<const double> xs, double bandwidth, double x) {
  double sum = 0.0;
  for (double xi : xs) {
    const double u = (x - xi) / bandwidth;
    sum += std::exp(-0.5 * u * u);
  }
  return sum / (static_cast<double>(xs.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
}

namespace {

double mean_shift(std::span<const double> xs, double bandwidth, double x) {
  for (int it = 0; it < 10000; ++it) {
    double wsum = 0.0, wx = 0.0;
    for (double xi : xs) {
      const double u = (x - xi) / bandwidth;
      const double w = std::exp(-0.5 * u * u);
      wsum += w;
      wx += w * xi;
    }
    if (wsum == 0.0) return x;
    const double next = wx / wsum;
    if (std::fabs(next - x) <= 1e-13 * bandwidth) return next;
    x = next;
  }
  return x;
}

}  // namespace

std::vector<DensityPeak> composition_modes(std::span<const double> xs, double bandwidth) {
  if (xs.empty()) fail(ErrorKind::InvalidInput, "composition_modes: no placements");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) fail(ErrorKind::InvalidInput, "composition_modes: bandwidth must be positive");
  for (double x : xs) {
    if (!std::isfinite(x)) fail(ErrorKind::InvalidInput, "composition_modes: non-finite placement");
  }
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it - 4.0 * bandwidth;
  const double step = bandwidth / 20.0;
  const auto steps = static_cast<std::size_t>(std::ceil((*hi_it + 4.0 * bandwidth - lo) / step));

  std::vector<double> f(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) f[i] = kde_density(xs, bandwidth, lo + step * static_cast<double>(i));

  std::vector<DensityPeak> peaks;
  for (std::size_t i = 1; i < steps; ++i) {
    if (!(f[i] > f[i - 1] && f[i] >= f[i + 1])) continue;
    const double x = mean_shift(xs, bandwidth, lo + step * static_cast<double>(i));
    const bool known = std::any_of(peaks.begin(), peaks.end(),
                                   [&](const DensityPeak& p) { return std::fabs(p.x - x) <= 1e-6 * bandwidth; });
    if (known) continue;
    const double fx = kde_density(xs, bandwidth, x);
    const double probe = 1e-3 * bandwidth;
    if (fx > kde_density(xs, bandwidth, x - probe) && fx > kde_density(xs, bandwidth, x + probe)) {
      peaks.push_back({x, fx});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const DensityPeak& a, const DensityPeak& b) {
    return a.density != b.density ? a.density > b.density : a.x < b.x;
  });
  return peaks;
}

}  // namespace pbench
