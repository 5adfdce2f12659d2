#include "pbench/geometry/triangulation.hpp"

#include <cmath>
#include <string>

#include "pbench/error.hpp"

namespace pbench {

Triangulation make_triangulation(std::vector<Point2> points, std::vector<Triangle> triangles) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      fail(ErrorKind::InvalidInput, "triangulation: point " + std::to_string(i) + " is not finite");
    }
  }
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tr = triangles[t];
    for (auto v : tr) {
      if (v >= points.size()) {
        fail(ErrorKind::InvalidInput, "triangulation: triangle " + std::to_string(t) + " references vertex " +
                                          std::to_string(v) + " of " + std::to_string(points.size()));
      }
    }
    const auto& a = points[tr[0]];
    const auto& b = points[tr[1]];
    const auto& c = points[tr[2]];
    const double area2 = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (area2 == 0.0 || tr[0] == tr[1] || tr[1] == tr[2] || tr[0] == tr[2]) {
      fail(ErrorKind::InvalidInput, "triangulation: triangle " + std::to_string(t) + " is degenerate");
    }
  }
  return Triangulation{std::move(points), std::move(triangles)};
}

std::vector<Point2> barycentres(const Triangulation& tri) {
  std::vector<Point2> out;
  out.reserve(tri.triangles.size());
  for (const auto& t : tri.triangles) {
    const auto& a = tri.points[t[0]];
    const auto& b = tri.points[t[1]];
    const auto& c = tri.points[t[2]];
    out.push_back({(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0});
  }
  return out;
}

}  // namespace pbench
