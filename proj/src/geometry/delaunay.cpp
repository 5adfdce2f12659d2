#include "pbench/geometry/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "pbench/error.hpp"

namespace pbench {

double orient2d(const Point2& a, const Point2& b, const Point2& c) noexcept {
  const long double v = static_cast<long double>(b.x - a.x) * (c.y - a.y) -
                        static_cast<long double>(b.y - a.y) * (c.x - a.x);
  return static_cast<double>(v);
}

namespace {

struct InCircle {
  long double det;
  long double magnitude;  // sum of absolute terms, for a relative tie test
};

InCircle incircle_terms(const Point2& a, const Point2& b, const Point2& c, const Point2& d) noexcept {
  const long double adx = a.x - d.x, ady = a.y - d.y;
  const long double bdx = b.x - d.x, bdy = b.y - d.y;
  const long double cdx = c.x - d.x, cdy = c.y - d.y;
  const long double alift = adx * adx + ady * ady;
  const long double blift = bdx * bdx + bdy * bdy;
  const long double clift = cdx * cdx + cdy * cdy;
  const long double bc = bdx * cdy - cdx * bdy;
  const long double ca = cdx * ady - adx * cdy;
  const long double ab = adx * bdy - bdx * ady;
  const long double det = alift * bc + blift * ca + clift * ab;
  const long double mag = alift * (std::fabs(bdx * cdy) + std::fabs(cdx * bdy)) +
                          blift * (std::fabs(cdx * ady) + std::fabs(adx * cdy)) +
                          clift * (std::fabs(adx * bdy) + std::fabs(bdx * ady));
  return {det, mag};
}

constexpr long double kCocircularTolerance = 1e-12L;

using Edge = std::pair<std::size_t, std::size_t>;

Edge edge_key(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

class FlipLegalizer {
 public:
  FlipLegalizer(std::span<const Point2> pts, std::vector<Triangle> tris) : pts_(pts), tris_(std::move(tris)) {
    for (std::size_t t = 0; t < tris_.size(); ++t) attach(t);
  }

  std::vector<Triangle> run() {
    std::vector<Edge> stack;
    for (const auto& [e, owners] : edges_) stack.push_back(e);
    const std::size_t cap = 64 * (tris_.size() + 8) * (tris_.size() + 8);
    std::size_t flips = 0;
    while (!stack.empty()) {
      const Edge e = stack.back();
      stack.pop_back();
      if (!needs_flip(e)) continue;
      if (++flips > cap) fail(ErrorKind::Analysis, "delaunay: edge flipping did not converge");
      flip(e, stack);
    }
    return std::move(tris_);
  }

 private:
  void attach(std::size_t t) {
    const auto& tr = tris_[t];
    for (int k = 0; k < 3; ++k) {
      auto& owners = edges_.try_emplace(edge_key(tr[k], tr[(k + 1) % 3]), npos, npos).first->second;
      (owners.first == npos ? owners.first : owners.second) = t;
    }
  }

  void detach(std::size_t t) {
    const auto& tr = tris_[t];
    for (int k = 0; k < 3; ++k) {
      auto it = edges_.find(edge_key(tr[k], tr[(k + 1) % 3]));
      auto& owners = it->second;
      if (owners.first == t) owners.first = owners.second;
      owners.second = npos;
      if (owners.first == npos) edges_.erase(it);
    }
  }

  static std::size_t opposite(const Triangle& t, const Edge& e) {
    for (auto v : t) {
      if (v != e.first && v != e.second) return v;
    }
    return npos;
  }

  // Orders (a, b, c) so the triangle has positive orientation.
  Triangle oriented(std::size_t a, std::size_t b, std::size_t c) const {
    if (orient2d(pts_[a], pts_[b], pts_[c]) < 0) std::swap(b, c);
    return {a, b, c};
  }

  bool needs_flip(const Edge& e) const {
    auto it = edges_.find(e);
    if (it == edges_.end() || it->second.second == npos) return false;  // hull edge
    const auto& t1 = tris_[it->second.first];
    const auto& t2 = tris_[it->second.second];
    const std::size_t a = e.first, b = e.second;
    const std::size_t c = opposite(t1, e), d = opposite(t2, e);

    // Both replacement triangles must be proper; otherwise the quad is not convex.
    const double o1 = orient2d(pts_[c], pts_[d], pts_[a]);
    const double o2 = orient2d(pts_[c], pts_[d], pts_[b]);
    if (!((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0))) return false;

    const Triangle abc = oriented(a, b, c);
    const auto ic = incircle_terms(pts_[abc[0]], pts_[abc[1]], pts_[abc[2]], pts_[d]);
    if (std::fabs(ic.det) <= kCocircularTolerance * ic.magnitude) {
      const std::size_t lowest = std::min({a, b, c, d});
      return lowest == c || lowest == d;
    }
    return ic.det > 0;
  }

  void flip(const Edge& e, std::vector<Edge>& stack) {
    const auto [t1, t2] = edges_.at(e);
    const std::size_t a = e.first, b = e.second;
    const std::size_t c = opposite(tris_[t1], e), d = opposite(tris_[t2], e);
    detach(t1);
    detach(t2);
    tris_[t1] = oriented(a, d, c);
    tris_[t2] = oriented(b, c, d);
    attach(t1);
    attach(t2);
    stack.push_back(edge_key(a, c));
    stack.push_back(edge_key(c, b));
    stack.push_back(edge_key(b, d));
    stack.push_back(edge_key(d, a));
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::span<const Point2> pts_;
  std::vector<Triangle> tris_;
  std::map<Edge, std::pair<std::size_t, std::size_t>> edges_;
};

// Sweeps points in lexicographic order, fanning each new point to the hull
// edges it can see. Produces a triangulation of the convex hull.
std::vector<Triangle> sweep_triangulation(std::span<const Point2> pts, const std::vector<std::size_t>& order) {
  const auto P = [&](std::size_t v) -> const Point2& { return pts[v]; };
  std::size_t m = 2;
  while (m < order.size() && orient2d(P(order[0]), P(order[1]), P(order[m])) == 0.0) ++m;
  if (m == order.size()) fail(ErrorKind::InvalidInput, "delaunay: all points are collinear");

  std::vector<Triangle> tris;
  const std::size_t apex = order[m];
  for (std::size_t j = 0; j + 1 < m; ++j) {
    Triangle t{order[j], order[j + 1], apex};
    if (orient2d(P(t[0]), P(t[1]), P(t[2])) < 0) std::swap(t[1], t[2]);
    tris.push_back(t);
  }

  // Hull kept with positive orientation.
  std::vector<std::size_t> hull;
  if (orient2d(P(order[0]), P(order[m - 1]), P(apex)) > 0) {
    hull.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    hull.push_back(apex);
  } else {
    hull.push_back(order[0]);
    hull.push_back(apex);
    for (std::size_t j = m - 1; j >= 1; --j) hull.push_back(order[j]);
  }

  for (std::size_t k = m + 1; k < order.size(); ++k) {
    const std::size_t v = order[k];
    const std::size_t h = hull.size();
    std::vector<char> visible(h);
    for (std::size_t i = 0; i < h; ++i) visible[i] = orient2d(P(hull[i]), P(hull[(i + 1) % h]), P(v)) < 0;

    std::size_t start = h;
    for (std::size_t i = 0; i < h; ++i) {
      if (visible[i] && !visible[(i + h - 1) % h]) {
        start = i;
        break;
      }
    }
    if (start == h) fail(ErrorKind::Analysis, "delaunay: sweep found no visible hull edge");

    std::size_t count = 0;
    while (visible[(start + count) % h]) {
      const std::size_t u = hull[(start + count) % h];
      const std::size_t w = hull[(start + count + 1) % h];
      tris.push_back({w, u, v});
      ++count;
    }
    // Hull vertices strictly inside the visible chain disappear; v takes their place.
    std::vector<std::size_t> next;
    next.reserve(h + 1);
    const std::size_t first = start;
    const std::size_t last = (start + count) % h;
    for (std::size_t i = last;; i = (i + 1) % h) {
      next.push_back(hull[i]);
      if (i == first) break;
    }
    next.push_back(v);
    hull = std::move(next);
  }
  return tris;
}

}  // namespace

double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) noexcept {
  return static_cast<double>(incircle_terms(a, b, c, d).det);
}

Triangulation delaunay_triangulate(std::span<const Point2> points) {
  if (points.size() < 3) fail(ErrorKind::InvalidInput, "delaunay: need at least 3 points, got " + std::to_string(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      fail(ErrorKind::InvalidInput, "delaunay: point " + std::to_string(i) + " is not finite");
    }
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::pair(points[i].x, points[i].y) < std::pair(points[j].x, points[j].y);
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points[order[k]] == points[order[k - 1]]) {
      fail(ErrorKind::InvalidInput, "delaunay: duplicate points " + std::to_string(order[k - 1]) + " and " +
                                        std::to_string(order[k]));
    }
  }

  auto tris = FlipLegalizer(points, sweep_triangulation(points, order)).run();

  for (auto& t : tris) {
    std::rotate(t.begin(), std::min_element(t.begin(), t.end()), t.end());
  }
  std::sort(tris.begin(), tris.end());
  return make_triangulation(std::vector<Point2>(points.begin(), points.end()), std::move(tris));
}

}  // namespace pbench
