#include "pbench/stats/ttest.hpp"

#include <cmath>
#include <string>

#include "pbench/error.hpp"
#include "pbench/stats/student_t.hpp"

namespace pbench {

namespace {

// Neumaier summation.
double accurate_sum(std::span<const double> xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    c += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

}  // namespace

SampleSummary summarize(std::span<const double> xs) {
  if (xs.empty()) fail(ErrorKind::InvalidInput, "summarize: empty sample");
  SampleSummary s;
  s.n = xs.size();
  s.mean = accurate_sum(xs) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0, c = 0.0;
    for (double x : xs) {
      const double d = (x - s.mean) * (x - s.mean);
      const double t = ss + d;
      c += ss >= d ? (ss - t) + d : (d - t) + ss;
      ss = t;
    }
    s.sd = std::sqrt((ss + c) / static_cast<double>(s.n - 1));
  }
  return s;
}

TTestResult ttest_independent(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    fail(ErrorKind::InvalidInput, "ttest: need at least 2 values per group, got " + std::to_string(a.size()) + " and " +
                                      std::to_string(b.size()));
  }
  for (auto xs : {a, b}) {
    for (double x : xs) {
      if (!std::isfinite(x)) fail(ErrorKind::InvalidInput, "ttest: non-finite sample value");
    }
  }
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  TTestResult r;
  r.n_a = sa.n;
  r.n_b = sb.n;
  r.mean_a = sa.mean;
  r.mean_b = sb.mean;
  r.sd_a = sa.sd;
  r.sd_b = sb.sd;
  r.df = static_cast<int>(sa.n + sb.n - 2);

  const double na = static_cast<double>(sa.n), nb = static_cast<double>(sb.n);
  const double pooled = ((na - 1.0) * sa.sd * sa.sd + (nb - 1.0) * sb.sd * sb.sd) / r.df;
  if (!(pooled > 0.0)) fail(ErrorKind::InvalidInput, "ttest: zero pooled variance");
  r.t = (sa.mean - sb.mean) / (std::sqrt(pooled) * std::sqrt(1.0 / na + 1.0 / nb));
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

}  // namespace pbench
