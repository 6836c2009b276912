#pragma once

#include <complex>
#include <span>

namespace dephasing {

/// Statistics of an ensemble of transmission coefficients T_1 ... T_N.
struct TransmissionStats {
  double transmission;          ///< t = mean |T|^2
  double epsilon;               ///< 1 - |mean T|^2 / t
  double mean_phase;            ///< arg(mean T), 0 when mean T vanishes
  std::complex<double> mean;    ///< mean T
};

/// The mean is accumulated as T_1 + mean(T_l - T_1) and epsilon as
/// mean |T_l - T_bar|^2 / t, so a constant ensemble gives exactly 0 and a
/// balanced +/-1 ensemble exactly 1.
///
/// Throws std::invalid_argument on an empty ensemble and
/// UndefinedEpsilonError when every T_l is zero.
TransmissionStats epsilon_1d(std::span<const std::complex<double>> ensemble);

/// Accumulated detector reading 1 + t + 2 sqrt(t (1 - eps)) cos(arg T_bar),
/// equal to mean |1 + T_l|^2.
double accumulated_distribution(std::span<const std::complex<double>> ensemble);
double accumulated_distribution(const TransmissionStats &stats);

} // namespace dephasing
