#pragma once

// Independent reference implementations used only by the tests. None of them
// share code with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Gaussian elimination with partial pivoting on a dense square system.
inline std::vector<double> dense_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

struct Pt {
  double x, y;
};

/// Minimizes |A z - b|^2 subject to sum(z) = 0 through the bordered
/// (Lagrange) normal equations, built from the explicit constraint rows.
/// Each row is a list of (vertex, coefficient) pairs.
struct SparseRow {
  std::vector<std::pair<std::size_t, double>> terms;
  double rhs;
};

inline std::vector<double> constrained_least_squares(const std::vector<SparseRow>& rows, std::size_t n) {
  Matrix m(n + 1, std::vector<double>(n + 1, 0.0));
  std::vector<double> rhs(n + 1, 0.0);
  for (const auto& row : rows) {
    for (const auto& [i, ci] : row.terms) {
      for (const auto& [j, cj] : row.terms) m[i][j] += ci * cj;
      rhs[i] += ci * row.rhs;
    }
  }
  for (std::size_t i = 0; i < n; ++i) m[i][n] = m[n][i] = 1.0;
  auto sol = dense_solve(m, rhs);
  sol.pop_back();
  return sol;
}

/// Andrew's monotone chain; returns the number of strict hull vertices.
inline std::size_t hull_size(std::vector<Pt> p) {
  std::sort(p.begin(), p.end(), [](const Pt& a, const Pt& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  auto cross = [](const Pt& o, const Pt& a, const Pt& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
  std::vector<Pt> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  return k - 1;
}

/// Circumcircle by explicit centre/radius rather than a determinant.
inline bool strictly_inside_circumcircle(Pt a, Pt b, Pt c, Pt d, double rel_tol = 1e-9) {
  const double bx = b.x - a.x, by = b.y - a.y, cx = c.x - a.x, cy = c.y - a.y;
  const double den = 2 * (bx * cy - by * cx);
  const double ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / den;
  const double uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / den;
  const double r2 = ux * ux + uy * uy;
  const double dx = d.x - a.x - ux, dy = d.y - a.y - uy;
  return dx * dx + dy * dy < r2 * (1 - rel_tol);
}

/// Gaussian KDE summed term by term.
inline double kde(const std::vector<double>& xs, double h, double x) {
  const double norm = 1.0 / (static_cast<double>(xs.size()) * h * std::sqrt(2 * M_PI));
  double s = 0;
  for (double xi : xs) s += std::exp(-0.5 * ((x - xi) / h) * ((x - xi) / h));
  return s * norm;
}

/// Pearson correlation.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
