#include "dephasing/scattering.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dephasing {

void validate(const Kinematics &kin) {
  if (!(kin.k > 0.0) || !std::isfinite(kin.k))
    throw std::invalid_argument("kinematics: k must be positive and finite");
  if (!(kin.theta >= 0.0 && kin.theta <= std::numbers::pi))
    throw std::invalid_argument("kinematics: theta must lie in [0, pi]");
  if (!(kin.phi >= 0.0 && kin.phi < 2.0 * std::numbers::pi))
    throw std::invalid_argument("kinematics: phi must lie in [0, 2pi)");
}

void validate(const AmplitudeModel &model) {
  if (const auto *g = std::get_if<BornGaussianAmplitude>(&model)) {
    if (!(g->width > 0.0) || !std::isfinite(g->width))
      throw std::invalid_argument("amplitude: Gaussian width must be positive");
  }
}

Vec3 momentum_transfer(const Kinematics &kin) {
  const double st = std::sin(kin.theta);
  const Vec3 outgoing{kin.k * st * std::cos(kin.phi), kin.k * st * std::sin(kin.phi),
                      kin.k * std::cos(kin.theta)};
  return outgoing - Vec3{0.0, 0.0, kin.k};
}

Complex phase_factor(const Vec3 &momentum, const Vec3 &r) {
  return std::polar(1.0, -dot(momentum, r));
}

Complex base_amplitude(const AmplitudeModel &model, double k, double momentum_magnitude) {
  if (const auto *le = std::get_if<LowEnergyAmplitude>(&model))
    return {-k * le->scattering_length, 0.0};

  // -(1/2pi) * V0 (2pi)^{3/2} sigma^3 exp(-K^2 sigma^2 / 2)
  const auto &g = std::get<BornGaussianAmplitude>(model);
  const double s = g.width;
  const double ks = momentum_magnitude * s;
  return {-g.strength * s * s * s * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * ks * ks),
          0.0};
}

Complex base_amplitude(const AmplitudeModel &model, const Kinematics &kin) {
  return base_amplitude(model, kin.k, 2.0 * kin.k * std::sin(0.5 * kin.theta));
}

Complex shifted_amplitude(const AmplitudeModel &model, const Kinematics &kin, const Vec3 &r) {
  return phase_factor(momentum_transfer(kin), r) * base_amplitude(model, kin);
}

} // namespace dephasing
