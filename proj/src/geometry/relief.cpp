#include "pbench/geometry/relief.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pbench/error.hpp"

namespace pbench {

namespace {

// Orders samples by triangle and checks coverage.
std::vector<GradientSample> per_triangle(const Triangulation& tri, std::span<const GradientSample> samples) {
  const std::size_t nt = tri.triangle_count();
  if (samples.size() != nt) {
    fail(ErrorKind::InvalidInput, "relief: " + std::to_string(samples.size()) + " samples for " + std::to_string(nt) +
                                      " triangles");
  }
  std::vector<GradientSample> out(nt);
  std::vector<char> seen(nt, 0);
  for (const auto& s : samples) {
    if (s.triangle >= nt) fail(ErrorKind::InvalidInput, "relief: sample for unknown triangle " + std::to_string(s.triangle));
    if (seen[s.triangle]) fail(ErrorKind::InvalidInput, "relief: duplicate sample for triangle " + std::to_string(s.triangle));
    if (!std::isfinite(s.p) || !std::isfinite(s.q)) {
      fail(ErrorKind::InvalidInput, "relief: non-finite gradient at triangle " + std::to_string(s.triangle));
    }
    seen[s.triangle] = 1;
    out[s.triangle] = s;
  }
  return out;
}

void require_connected(const Triangulation& tri) {
  const std::size_t n = tri.vertex_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& t : tri.triangles) {
    parent[find(t[1])] = find(t[0]);
    parent[find(t[2])] = find(t[0]);
  }
  const std::size_t root = n ? find(0) : 0;
  for (std::size_t v = 1; v < n; ++v) {
    if (find(v) != root) {
      fail(ErrorKind::InvalidInput, "relief: ambiguous gauge, vertex " + std::to_string(v) +
                                        " is not connected to vertex 0 through the triangulation");
    }
  }
}

template <class F>
void for_each_constraint(const Triangulation& tri, const std::vector<GradientSample>& g, F&& f) {
  for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
    const auto& tr = tri.triangles[t];
    const auto& a = tri.points[tr[0]];
    for (int k = 1; k <= 2; ++k) {
      const auto& b = tri.points[tr[k]];
      f(tr[0], tr[k], g[t].p * (b.x - a.x) + g[t].q * (b.y - a.y));
    }
  }
}

}  // namespace

double relief_objective(const Triangulation& tri, std::span<const GradientSample> samples,
                        std::span<const double> depths) {
  const auto g = per_triangle(tri, samples);
  double sum = 0.0;
  for_each_constraint(tri, g, [&](std::size_t i, std::size_t j, double rhs) {
    const double r = (depths[j] - depths[i]) - rhs;
    sum += r * r;
  });
  return sum;
}

ReliefSurface reconstruct_relief(const Triangulation& tri, std::span<const GradientSample> samples) {
  const auto g = per_triangle(tri, samples);
  const std::size_t n = tri.vertex_count();
  if (n == 0 || tri.triangle_count() == 0) fail(ErrorKind::InvalidInput, "relief: empty triangulation");
  require_connected(tri);

  // Normal equations of the edge system. Each row is e_j - e_i, so the
  // matrix is a weighted graph Laplacian and A^T b sums to zero. Adding the
  // rank-one term 1 1^T / n makes it positive definite without changing the
  // zero-mean solution.
  Eigen::MatrixXd normal = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n),
                                                     1.0 / static_cast<double>(n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for_each_constraint(tri, g, [&](std::size_t i, std::size_t j, double b) {
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    normal(ii, ii) += 1.0;
    normal(jj, jj) += 1.0;
    normal(ii, jj) -= 1.0;
    normal(jj, ii) -= 1.0;
    rhs(jj) += b;
    rhs(ii) -= b;
  });

  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) fail(ErrorKind::Analysis, "relief: normal equations are not positive definite");
  Eigen::VectorXd z = llt.solve(rhs);
  // One step of iterative refinement keeps the residual at rounding level.
  z += llt.solve(rhs - normal * z);
  z.array() -= z.mean();

  ReliefSurface out;
  out.depths.assign(z.data(), z.data() + z.size());
  out.residual = relief_objective(tri, samples, out.depths);
  out.rms_misfit = std::sqrt(out.residual / static_cast<double>(2 * tri.triangle_count()));
  return out;
}

double relief_depth_range(const ReliefSurface& surface) noexcept {
  if (surface.depths.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(surface.depths.begin(), surface.depths.end());
  return *hi - *lo;
}

}  // namespace pbench
