#include "pbench/stats/regression.hpp"

#include <cmath>
#include <string>

#include "pbench/error.hpp"
#include "pbench/stats/student_t.hpp"

namespace pbench {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y, std::size_t min_n, const char* what) {
  if (x.size() != y.size()) fail(ErrorKind::InvalidInput, std::string(what) + ": x and y lengths differ");
  if (x.size() < min_n) {
    fail(ErrorKind::InvalidInput, std::string(what) + ": need at least " + std::to_string(min_n) + " points, got " +
                                      std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) fail(ErrorKind::InvalidInput, std::string(what) + ": non-finite value");
  }
}

void slope_inference(StatResult& r) {
  if (r.slope_stderr > 0.0) {
    r.t = r.slope / r.slope_stderr;
    r.p = student_t_two_sided_p(r.t, r.df);
  } else if (r.slope == 0.0) {
    r.t = 0.0;
    r.p = 1.0;
  } else {
    r.t = std::copysign(INFINITY, r.slope);
    r.p = 0.0;
  }
}

}  // namespace

StatResult fit_line(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y, 3, "fit_line");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::InvalidInput, "fit_line: singular design, all x values are equal");

  StatResult r;
  r.n = x.size();
  r.df = static_cast<int>(x.size()) - 2;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - my - r.slope * (x[i] - mx);
    r.rss += e * e;
  }
  const double s2 = r.rss / r.df;
  r.slope_stderr = std::sqrt(s2 / sxx);
  r.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  slope_inference(r);
  return r;
}

StatResult fit_through_origin(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y, 2, "fit_through_origin");
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  if (sxx == 0.0) fail(ErrorKind::InvalidInput, "fit_through_origin: all x values are zero");
  StatResult r;
  r.n = x.size();
  r.df = static_cast<int>(x.size()) - 1;
  r.slope = sxy / sxx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - r.slope * x[i];
    r.rss += e * e;
  }
  r.slope_stderr = std::sqrt(r.rss / r.df / sxx);
  slope_inference(r);
  return r;
}

}  // namespace pbench
