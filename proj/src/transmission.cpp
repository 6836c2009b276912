#include "dephasing/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dephasing/errors.hpp"
#include "dephasing/summation.hpp"

namespace dephasing {

TransmissionStats epsilon_1d(std::span<const std::complex<double>> ensemble) {
  if (ensemble.empty())
    throw std::invalid_argument("transmission: ensemble is empty");

  const double inv_n = 1.0 / static_cast<double>(ensemble.size());
  const auto pivot = ensemble.front();

  CompensatedComplexSum shift;
  CompensatedSum intensity;
  for (const auto &t : ensemble) {
    shift.add(t - pivot);
    intensity.add(std::norm(t));
  }
  const double t = intensity.value() * inv_n;
  if (!(t > 0.0))
    throw UndefinedEpsilonError("transmission: mean |T|^2 vanishes, epsilon undefined");

  const std::complex<double> mean = pivot + shift.value() * inv_n;
  CompensatedSum spread;
  for (const auto &v : ensemble)
    spread.add(std::norm(v - mean));

  const double eps = std::clamp(spread.value() * inv_n / t, 0.0, 1.0);
  const double arg = mean == std::complex<double>{} ? 0.0 : std::arg(mean);
  return {t, eps, arg, mean};
}

double accumulated_distribution(const TransmissionStats &s) {
  return 1.0 + s.transmission +
         2.0 * std::sqrt(s.transmission * (1.0 - s.epsilon)) * std::cos(s.mean_phase);
}

double accumulated_distribution(std::span<const std::complex<double>> ensemble) {
  return accumulated_distribution(epsilon_1d(ensemble));
}

} // namespace dephasing
