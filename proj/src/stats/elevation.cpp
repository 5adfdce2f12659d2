#include "pbench/stats/elevation.hpp"

#include <algorithm>
#include <map>

#include "pbench/error.hpp"

namespace pbench {

std::string_view to_string(OffsetMode m) noexcept {
  return m == OffsetMode::ThroughOrigin ? "through-origin" : "free-offset";
}

OffsetMode offset_mode_from_string(std::string_view s) {
  if (s == "through-origin" || s == "zero") return OffsetMode::ThroughOrigin;
  if (s == "free-offset" || s == "free") return OffsetMode::FreeOffset;
  fail(ErrorKind::InvalidInput, "unknown offset mode '" + std::string(s) + "' (use through-origin or free-offset)");
}

ElevationEstimate fit_elevation(std::span<const FigureAnnotation> figures, double horizon_y, OffsetMode mode) {
  const std::size_t need = mode == OffsetMode::ThroughOrigin ? 2 : 3;
  if (figures.size() < need) {
    fail(ErrorKind::InvalidInput, "fit_elevation: need at least " + std::to_string(need) + " figures, got " +
                                      std::to_string(figures.size()));
  }
  std::vector<double> heights, distances;
  for (std::size_t i = 0; i < figures.size(); ++i) {
    const auto& f = figures[i];
    const double s = f.foot_y - f.head_y;
    if (!(s > 0.0)) {
      fail(ErrorKind::InvalidInput, "fit_elevation: figure " + std::to_string(i) + " has non-positive height " +
                                        std::to_string(s) + " px (feet must be below the head)");
    }
    heights.push_back(s);
    distances.push_back(f.foot_y - horizon_y);
  }

  const StatResult fit = mode == OffsetMode::ThroughOrigin ? fit_through_origin(heights, distances)
                                                           : fit_line(heights, distances);
  ElevationEstimate e;
  e.h = fit.slope;
  e.stderr_h = fit.slope_stderr;
  e.t = fit.t;
  e.df = fit.df;
  e.p = fit.p;
  e.mode = mode;
  e.offset = fit.intercept;
  e.offset_stderr = fit.intercept_stderr;
  e.n = fit.n;
  return e;
}

ImageElevation estimate_image_elevation(std::span<const PerspectiveRecord> records, OffsetMode mode,
                                        const std::optional<std::string>& horizon_annotator) {
  if (records.empty()) fail(ErrorKind::InvalidInput, "estimate_image_elevation: no annotations");
  ImageElevation out;
  out.image_name = records.front().image_name;

  std::map<std::string, double> horizons;
  std::vector<FigureAnnotation> figures;
  for (const auto& r : records) {
    if (r.image_name != out.image_name) fail(ErrorKind::InvalidInput, "estimate_image_elevation: records span several images");
    if (r.kind == AnnotationKind::Horizon) {
      horizons[r.session] = 0.5 * (r.y1 + r.y2);
    } else {
      figures.push_back({r.x1, r.y1, r.x2, r.y2, r.image_name, r.session});
    }
  }
  out.figure_count = figures.size();
  if (horizon_annotator) {
    auto it = horizons.find(*horizon_annotator);
    if (it == horizons.end()) {
      fail(ErrorKind::InvalidInput, "image '" + out.image_name + "': annotator '" + *horizon_annotator + "' drew no horizon");
    }
    horizons = {*it};
  }
  if (horizons.empty()) fail(ErrorKind::InvalidInput, "image '" + out.image_name + "': no horizon annotation");

  for (const auto& [annotator, y] : horizons) out.per_horizon.emplace_back(annotator, fit_elevation(figures, y, mode));

  std::vector<std::size_t> order(out.per_horizon.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.per_horizon[a].second.h < out.per_horizon[b].second.h;
  });
  const std::size_t mid = order[(order.size() - 1) / 2];
  out.aggregate = out.per_horizon[mid].second;
  out.aggregate_source = out.per_horizon[mid].first;
  return out;
}

}  // namespace pbench
