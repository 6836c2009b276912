#include "dephasing/window.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dephasing {

void validate(const DetectorWindow &w) {
  constexpr double pi = std::numbers::pi;
  if (!(w.dtheta > 0.0))
    throw std::invalid_argument("window: dtheta must be positive");
  if (!(w.dphi > 0.0) || w.dphi > 2.0 * pi)
    throw std::invalid_argument("window: dphi must lie in (0, 2pi]");
  if (!(w.theta0 >= 0.0 && w.theta0 < pi))
    throw std::invalid_argument("window: theta0 must lie in [0, pi)");
  if (w.theta0 + w.dtheta > pi * (1.0 + 1e-15))
    throw std::invalid_argument("window: theta0 + dtheta must not exceed pi");
  if (!(w.phi0 >= 0.0 && w.phi0 < 2.0 * pi))
    throw std::invalid_argument("window: phi0 must lie in [0, 2pi)");
}

double solid_angle(const DetectorWindow &w) {
  // cos a - cos b = 2 sin((a+b)/2) sin((b-a)/2), free of cancellation for small dtheta
  const double mid = w.theta0 + 0.5 * w.dtheta;
  return w.dphi * 2.0 * std::sin(mid) * std::sin(0.5 * w.dtheta);
}

double expanded_polar_extent(const DetectorWindow &w) {
  return w.dtheta * std::sin(w.theta0) + 0.5 * w.dtheta * w.dtheta * std::cos(w.theta0);
}

} // namespace dephasing
