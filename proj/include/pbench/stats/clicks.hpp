#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pbench/experiment/results.hpp"
#include "pbench/experiment/spec.hpp"
#include "pbench/geometry/triangulation.hpp"

namespace pbench {

struct ImageSize {
  int width = 0;
  int height = 0;
};

inline constexpr double kCorrectRadius = 0.1;

/// True iff the click lies within `radius` of the target centre, with both
/// offsets divided by the image *width*. The boundary is inclusive; a relative
/// slack of 1e-9 absorbs rounding when the distance is computed from pixels.
bool classify_click(Point2 click, Point2 target_center, ImageSize image, double radius = kCorrectRadius);

/// Target centre of a flicker stimulus in pixels.
Point2 target_center_px(const StimulusRef& s);

/// Keeps trials answered before the reveal (revealed == false and
/// rtMs <= reveal-ms) whose click classifies as correct. Throws InvalidInput
/// for records naming stimuli absent from `spec`.
std::vector<FlickerRecord> filter_valid_trials(std::span<const FlickerRecord> records, const ExperimentSpec& spec);

/// Row-major accumulation grid, one cell per image pixel.
struct DensityGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> cells;

  std::uint32_t at(int x, int y) const { return cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)]; }
  std::uint64_t total() const noexcept;
  friend bool operator==(const DensityGrid&, const DensityGrid&) = default;
};

/// Every click adds 1 to each cell whose centre (col + 0.5, row + 0.5) lies
/// within `radius` pixels. Throws InvalidInput for a non-positive radius, an
/// empty image, or a click outside [0, width] x [0, height].
DensityGrid click_density(std::span<const Point2> clicks, ImageSize image, double radius);

/// Header row of column indices, then one line per image row.
std::string density_to_csv(const DensityGrid& grid);
/// Binary 8-bit PGM (P5), cells scaled so the maximum maps to 255.
std::string density_to_pgm(const DensityGrid& grid);

}  // namespace pbench
