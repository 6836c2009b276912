#pragma once

namespace dephasing {

/// Solid-angle acceptance [theta0, theta0 + dtheta] x [phi0, phi0 + dphi]
/// under which the scatterer sees the detector.
struct DetectorWindow {
  double theta0{0.0};
  double phi0{0.0};
  double dtheta{0.1};
  double dphi{0.1};
};

/// Throws std::invalid_argument naming the offending field.
void validate(const DetectorWindow &w);

/// Exact solid angle dphi * (cos theta0 - cos(theta0 + dtheta)).
double solid_angle(const DetectorWindow &w);

/// dtheta sin(theta0) + dtheta^2 / 2 cos(theta0): the second-order expansion
/// of cos(theta0) - cos(theta0 + dtheta).
double expanded_polar_extent(const DetectorWindow &w);

} // namespace dephasing
