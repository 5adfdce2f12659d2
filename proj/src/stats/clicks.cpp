#include "pbench/stats/clicks.hpp"

#include <algorithm>
#include <cmath>

#include "pbench/error.hpp"

namespace pbench {

bool classify_click(Point2 click, Point2 target_center, ImageSize image, double radius) {
  if (image.width <= 0) fail(ErrorKind::InvalidInput, "classify_click: image width must be positive");
  const double w = image.width;
  const double d = std::hypot((click.x - target_center.x) / w, (click.y - target_center.y) / w);
  return d <= radius * (1.0 + 1e-9);
}

Point2 target_center_px(const StimulusRef& s) {
  if (!s.target) fail(ErrorKind::InvalidInput, "stimulus '" + s.name + "' has no target ellipse");
  return {s.target->cx * s.width_px, s.target->cy * s.height_px};
}

std::vector<FlickerRecord> filter_valid_trials(std::span<const FlickerRecord> records, const ExperimentSpec& spec) {
  const double max_rt = spec.parameter("reveal-ms");
  const double radius = spec.parameter("correct-radius");
  std::vector<FlickerRecord> out;
  for (const auto& r : records) {
    const auto* s = spec.find_stimulus(r.image_name);
    if (!s) fail(ErrorKind::InvalidInput, "flicker record references unknown stimulus '" + r.image_name + "'");
    if (r.revealed || r.rt_ms > max_rt) continue;
    if (!classify_click({r.click_x, r.click_y}, target_center_px(*s), {s->width_px, s->height_px}, radius)) continue;
    out.push_back(r);
  }
  return out;
}

std::uint64_t DensityGrid::total() const noexcept {
  std::uint64_t sum = 0;
  for (auto c : cells) sum += c;
  return sum;
}

DensityGrid click_density(std::span<const Point2> clicks, ImageSize image, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::InvalidInput, "click_density: radius must be positive");
  if (image.width <= 0 || image.height <= 0) fail(ErrorKind::InvalidInput, "click_density: empty image");
  DensityGrid g{image.width, image.height,
                std::vector<std::uint32_t>(static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height), 0)};
  const double r2 = radius * radius;
  for (const auto& c : clicks) {
    if (!(c.x >= 0.0 && c.x <= image.width && c.y >= 0.0 && c.y <= image.height)) {
      fail(ErrorKind::InvalidInput, "click_density: click (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                                        ") outside the image");
    }
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y - radius - 0.5)));
    const int y1 = std::min(image.height - 1, static_cast<int>(std::ceil(c.y + radius)));
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x - radius - 0.5)));
    const int x1 = std::min(image.width - 1, static_cast<int>(std::ceil(c.x + radius)));
    for (int y = y0; y <= y1; ++y) {
      const double dy = y + 0.5 - c.y;
      for (int x = x0; x <= x1; ++x) {
        const double dx = x + 0.5 - c.x;
        if (dx * dx + dy * dy <= r2) ++g.cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(g.width) + static_cast<std::size_t>(x)];
      }
    }
  }
  return g;
}

std::string density_to_csv(const DensityGrid& grid) {
  std::string out;
  for (int x = 0; x < grid.width; ++x) {
    if (x) out.push_back(',');
    out += std::to_string(x);
  }
  out.push_back('\n');
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (x) out.push_back(',');
      out += std::to_string(grid.at(x, y));
    }
    out.push_back('\n');
  }
  return out;
}

std::string density_to_pgm(const DensityGrid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n255\n";
  const std::uint64_t max = grid.cells.empty() ? 0 : *std::max_element(grid.cells.begin(), grid.cells.end());
  out.reserve(out.size() + grid.cells.size());
  for (auto c : grid.cells) {
    const std::uint64_t v = max == 0 ? 0 : (255 * static_cast<std::uint64_t>(c) + max / 2) / max;
    out.push_back(static_cast<char>(static_cast<unsigned char>(v)));
  }
  return out;
}

}  // namespace pbench
