#pragma once

#include <complex>
#include <variant>

#include "dephasing/vec3.hpp"

namespace dephasing {

using Complex = std::complex<double>;

/// Elastic scattering geometry. The incident wave travels along +z; the
/// outgoing direction is given by spherical angles about that axis.
struct Kinematics {
  double k{1.0};     ///< incident wavenumber, k > 0
  double theta{0.0}; ///< polar scattering angle in [0, pi]
  double phi{0.0};   ///< azimuth in [0, 2pi)
};

/// Contact interaction characterised by its scattering length b.
struct LowEnergyAmplitude {
  double scattering_length{1.0};
};

/// First Born approximation for V(r) = strength * exp(-r^2 / (2 width^2)).
struct BornGaussianAmplitude {
  double strength{1.0};
  double width{1.0};
};

using AmplitudeModel = std::variant<LowEnergyAmplitude, BornGaussianAmplitude>;

/// Throws std::invalid_argument on k <= 0 or angles out of range.
void validate(const Kinematics &kin);
/// Throws std::invalid_argument on a non-positive Gaussian width.
void validate(const AmplitudeModel &model);

/// K = k' - k for elastic scattering; |K| = 2 k sin(theta / 2).
Vec3 momentum_transfer(const Kinematics &kin);

/// exp(-i K.r), the factor picked up by an amplitude when the scattering
/// centre is displaced to r.
Complex phase_factor(const Vec3 &momentum, const Vec3 &r);

/// Amplitude of the potential centred at the origin, as a function of the
/// momentum-transfer magnitude. Natural units, hbar = m = 1.
Complex base_amplitude(const AmplitudeModel &model, double k, double momentum_magnitude);
Complex base_amplitude(const AmplitudeModel &model, const Kinematics &kin);

/// Amplitude of the same potential centred at r: phase_factor * base.
Complex shifted_amplitude(const AmplitudeModel &model, const Kinematics &kin, const Vec3 &r);

} // namespace dephasing
