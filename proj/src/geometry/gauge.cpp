#include "pbench/geometry/gauge.hpp"

#include <cmath>
#include <string>

#include "pbench/error.hpp"

namespace pbench {

double normalize_angle(double radians) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, two_pi);
  if (a < 0) a += two_pi;
  if (a >= two_pi) a = 0.0;  // fmod rounding on tiny negatives
  return a;
}

Gradient slant_tilt_to_gradient(double slant, double tilt) {
  if (!std::isfinite(slant) || !std::isfinite(tilt)) fail(ErrorKind::InvalidInput, "gauge: non-finite angle");
  if (slant < 0.0) fail(ErrorKind::InvalidInput, "gauge: negative slant");
  if (slant > kMaxSlant) {
    fail(ErrorKind::InvalidInput, "gauge: slant overflow (" + std::to_string(rad2deg(slant)) + " deg > " +
                                      std::to_string(kMaxSlantDeg) + " deg)");
  }
  const double m = std::tan(slant);
  return {m * std::cos(tilt), m * std::sin(tilt)};
}

GaugeSetting gradient_to_slant_tilt(double p, double q) noexcept {
  const double m = std::hypot(p, q);
  if (m == 0.0) return {0.0, 0.0};
  return {std::atan(m), normalize_angle(std::atan2(q, p))};
}

}  // namespace pbench
