#pragma once

#include <span>
#include <vector>

#include "pbench/geometry/gauge.hpp"
#include "pbench/geometry/triangulation.hpp"

namespace pbench {

/// One probe setting expressed as a depth gradient over a triangle.
struct GradientSample {
  std::size_t triangle = 0;
  double p = 0.0;
  double q = 0.0;
};

/// Per-vertex depths of a reconstructed pictorial relief, gauge-fixed to zero
/// mean. Depth units are pixels (gradients are dimensionless).
struct ReliefSurface {
  std::vector<double> depths;
  /// Least-squares objective at the solution (sum of squared edge misfits).
  double residual = 0.0;
  /// Root-mean-square edge misfit, residual / constraint count under the root.
  double rms_misfit = 0.0;
};

/// Integrates one gradient per triangle into vertex depths.
///
/// Each triangle (v0, v1, v2) contributes two equations, one per edge leaving
/// its first vertex: z[vk] - z[v0] = p * (x[vk] - x[v0]) + q * (y[vk] - y[v0]).
/// The stacked system is solved in the least-squares sense and the additive
/// constant is fixed by requiring mean(z) = 0.
///
/// Throws InvalidInput when samples do not cover every triangle exactly once,
/// a gradient is not finite, or the triangulation has more than one connected
/// component (including unused vertices), since the depth offset between
/// components would be arbitrary.
ReliefSurface reconstruct_relief(const Triangulation& tri, std::span<const GradientSample> samples);

/// The objective minimized by reconstruct_relief, evaluated at `depths`.
double relief_objective(const Triangulation& tri, std::span<const GradientSample> samples,
                        std::span<const double> depths);

/// max(z) - min(z); 0 for an empty surface.
double relief_depth_range(const ReliefSurface& surface) noexcept;

}  // namespace pbench
