#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbench/experiment/results.hpp"
#include "pbench/stats/regression.hpp"

namespace pbench {

/// A feet-to-head segment in image pixels (y down, so foot_y > head_y).
struct FigureAnnotation {
  double foot_x = 0.0;
  double foot_y = 0.0;
  double head_x = 0.0;
  double head_y = 0.0;
  std::string image_name;
  std::string annotator;
};

enum class OffsetMode { ThroughOrigin, FreeOffset };

std::string_view to_string(OffsetMode m) noexcept;
OffsetMode offset_mode_from_string(std::string_view s);

/// Viewpoint elevation in body heights.
struct ElevationEstimate {
  double h = 0.0;
  double stderr_h = 0.0;
  double t = 0.0;
  int df = 0;
  double p = 1.0;
  OffsetMode mode = OffsetMode::ThroughOrigin;
  double offset = 0.0;         // free-offset fits only, pixels
  double offset_stderr = 0.0;  // free-offset fits only
  std::size_t n = 0;
};

/// Regresses the foot-to-horizon distance d = foot_y - horizon_y on the
/// figure height s = foot_y - head_y. By the horizon ratio the slope is the
/// eye height in units of the figures' height. Through-origin needs >= 2
/// figures, free offset >= 3. Throws InvalidInput for any figure whose head
/// is not above its feet.
ElevationEstimate fit_elevation(std::span<const FigureAnnotation> figures, double horizon_y, OffsetMode mode);

/// Elevation of one image from possibly several annotators.
struct ImageElevation {
  std::string image_name;
  std::vector<std::pair<std::string, ElevationEstimate>> per_horizon;  // annotator -> fit, sorted by annotator
  ElevationEstimate aggregate;   // the (lower) median of per_horizon by h
  std::string aggregate_source;  // annotator whose horizon produced `aggregate`
  std::size_t figure_count = 0;
};

/// Pools every figure drawn on the image, fits once per annotator horizon
/// and aggregates by the lower median of h. With `horizon_annotator` only that
/// annotator's horizon is used. When an annotator stored several horizons the
/// last one counts. Throws InvalidInput if no usable horizon exists or the
/// records span several images.
ImageElevation estimate_image_elevation(std::span<const PerspectiveRecord> records, OffsetMode mode,
                                        const std::optional<std::string>& horizon_annotator = std::nullopt);

}  // namespace pbench
