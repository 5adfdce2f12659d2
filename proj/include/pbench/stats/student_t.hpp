#pragma once

namespace pbench {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1],
/// evaluated by Lentz's continued fraction to ~1e-15 relative accuracy.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) of Student's t with `df` degrees
/// of freedom. Returns 0 for infinite t and 1 for t == 0.
double student_t_two_sided_p(double t, double df);

/// Lower-tail CDF of Student's t.
double student_t_cdf(double t, double df);

}  // namespace pbench
