#pragma once

#include <numbers>

namespace pbench {

// Depth z grows toward the viewer. Gradients are taken in image pixel
// coordinates (x right, y down), so a tilt of 90 degrees points down the
// screen. To express a relief with y up, negate q (equivalently tilt -> -tilt).

inline constexpr double kMaxSlantDeg = 89.0;
inline constexpr double kMaxSlant = kMaxSlantDeg * std::numbers::pi / 180.0;

/// Slant/tilt of one probe setting, radians.
struct GaugeSetting {
  double slant = 0.0;  // [0, kMaxSlant]
  double tilt = 0.0;   // [0, 2*pi)
};

/// Depth gradient (dz/dx, dz/dy).
struct Gradient {
  double p = 0.0;
  double q = 0.0;
};

/// (tan s cos t, tan s sin t). Throws InvalidInput when the slant is negative,
/// exceeds kMaxSlant, or either angle is not finite.
Gradient slant_tilt_to_gradient(double slant, double tilt);
inline Gradient slant_tilt_to_gradient(GaugeSetting g) { return slant_tilt_to_gradient(g.slant, g.tilt); }

/// Inverse map; tilt normalized to [0, 2*pi) and 0 for a frontoparallel patch.
GaugeSetting gradient_to_slant_tilt(double p, double q) noexcept;

/// Wraps any finite angle into [0, 2*pi).
double normalize_angle(double radians) noexcept;

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

}  // namespace pbench
