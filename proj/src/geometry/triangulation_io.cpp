#include "pbench/geometry/triangulation_io.hpp"

#include "pbench/error.hpp"
#include "pbench/experiment/csv.hpp"
#include "pbench/experiment/number.hpp"

namespace pbench {

std::string write_triangulation_csv(const Triangulation& tri) {
  std::string out = "#points\npx,py\n";
  for (const auto& p : tri.points) out += format_number(p.x) + "," + format_number(p.y) + "\n";
  out += "#triangles\ni,j,k\n";
  for (const auto& t : tri.triangles) {
    out += std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + "\n";
  }
  return out;
}

Triangulation parse_triangulation_csv(std::string_view text) {
  const auto points_at = text.find("#points");
  const auto tris_at = text.find("#triangles");
  if (points_at == std::string_view::npos || tris_at == std::string_view::npos || tris_at < points_at) {
    fail(ErrorKind::InvalidInput, "triangulation csv: expected '#points' then '#triangles' sections");
  }
  auto section = [&](std::size_t from, std::size_t to, std::string_view marker) {
    auto body = text.substr(from + marker.size(), to - from - marker.size());
    while (!body.empty() && (body.front() == '\r' || body.front() == '\n')) body.remove_prefix(1);
    return parse_trial_table(body);
  };
  const auto pts = section(points_at, tris_at, "#points");
  const auto tris = section(tris_at, text.size(), "#triangles");
  if (pts.header() != std::vector<std::string>{"px", "py"}) fail(ErrorKind::InvalidInput, "triangulation csv: points header must be px,py");
  if (tris.header() != std::vector<std::string>{"i", "j", "k"}) fail(ErrorKind::InvalidInput, "triangulation csv: triangles header must be i,j,k");

  std::vector<Point2> points;
  for (std::size_t r = 0; r < pts.size(); ++r) {
    const auto x = parse_double(pts.rows()[r][0]);
    const auto y = parse_double(pts.rows()[r][1]);
    if (!x || !y) fail(ErrorKind::InvalidInput, "triangulation csv: bad point row " + std::to_string(r + 1));
    points.push_back({*x, *y});
  }
  std::vector<Triangle> triangles;
  for (std::size_t r = 0; r < tris.size(); ++r) {
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      const auto v = parse_int(tris.rows()[r][static_cast<std::size_t>(k)]);
      if (!v || *v < 0) fail(ErrorKind::InvalidInput, "triangulation csv: bad triangle row " + std::to_string(r + 1));
      t[static_cast<std::size_t>(k)] = static_cast<std::size_t>(*v);
    }
    triangles.push_back(t);
  }
  return make_triangulation(std::move(points), std::move(triangles));
}

std::string write_relief_csv(const Triangulation& tri, const ReliefSurface& surface) {
  std::string out = "vertex,px,py,z\n";
  for (std::size_t v = 0; v < tri.points.size(); ++v) {
    out += std::to_string(v) + "," + format_number(tri.points[v].x) + "," + format_number(tri.points[v].y) + "," +
           format_number(surface.depths.at(v)) + "\n";
  }
  return out;
}

}  // namespace pbench
