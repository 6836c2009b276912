#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "dephasing/quadrature.hpp"
#include "dephasing/scattering.hpp"
#include "dephasing/trajectory.hpp"
#include "dephasing/window.hpp"

namespace dephasing {

enum class Regime { Coherent, Intermediate, Dephased };

std::string_view to_string(Regime r);

/// Boundaries on the window term x: below `coherent` the run keeps its
/// interference, above `dephased` it is a measurement.
struct RegimeThresholds {
  double coherent{0.01};
  double dephased{10.0};
};

/// Throws std::invalid_argument for negative or NaN x.
Regime classify_regime(double window_term, const RegimeThresholds &thresholds = {});

/// y = N_p (dL)^2 k^2, the only combination of walk length, step size and
/// wavenumber the Gaussian model depends on.
struct DephasingScale {
  double y{0.0};

  /// Throws std::invalid_argument unless np >= 1, dl > 0 and k > 0.
  static DephasingScale from(std::size_t np, double step_length, double k);
};

struct ClosedFormResult {
  double epsilon;
  double prefactor_exponent; ///< a = y (1 - cos theta0)
  double window_term;        ///< w = y (dtheta sin theta0 + dtheta^2/2 cos theta0)
  Regime regime;
};

/// Closed-form decoherence parameter of the Gaussian chaos model,
///   eps = 1 - [exp(-a) (1 - exp(-w)) / w]^2,
/// with the polar window extent taken to second order in dtheta. For
/// w < 1e-8 the bracket uses its series limit 1 - w/2.
ClosedFormResult epsilon_gaussian_closed_form(DephasingScale scale, const DetectorWindow &window,
                                              const RegimeThresholds &thresholds = {});
ClosedFormResult epsilon_gaussian_closed_form(std::size_t np, double step_length, double k,
                                              const DetectorWindow &window,
                                              const RegimeThresholds &thresholds = {});

/// Same model by direct 2D quadrature of exp(-y (1 - cos theta)) over the
/// window, with no small-window expansion. Independent check on the closed form.
double epsilon_gaussian_quadrature(DephasingScale scale, const DetectorWindow &window,
                                   const QuadratureSpec &quad = {});
double epsilon_gaussian_quadrature(std::size_t np, double step_length, double k,
                                   const DetectorWindow &window, const QuadratureSpec &quad = {});

/// (1/N) sum_{l=1..N} exp(-l c): the exact expectation of the walk-averaged
/// phase when position l has per-axis variance l dL^2 and c = dL^2 K^2 / 2.
double walk_expectation(std::size_t np, double c);

/// Window average of walk_expectation over the detector window.
double window_walk_expectation(std::size_t np, double step_length, double k,
                               const DetectorWindow &window, const QuadratureSpec &quad = {});

/// eps from the exact per-step walk expectation instead of the single
/// Gaussian at total variance N dL^2.
double epsilon_walk_sum(std::size_t np, double step_length, double k, const DetectorWindow &window,
                        const QuadratureSpec &quad = {});

struct EmpiricalResult {
  double epsilon;
  Complex numerator;   ///< integral over the window of the l-averaged amplitude
  double denominator;  ///< l-average of the window integral of |F_l|^2
  double solid_angle;  ///< quadrature value of the window's solid angle
  int order;           ///< per-axis quadrature order that met the tolerance
};

/// Decoherence parameter of an actual trajectory:
///   eps = 1 - |int F_bar dw|^2 / (dOmega * mean_l int |F_l|^2 dw),
/// where F_l is the amplitude of the scatterer displaced to r_l. The
/// solid-angle factor dOmega makes the ratio dimensionless and bounded by
/// Cauchy-Schwarz.
///
/// Throws std::invalid_argument on an empty trajectory, k <= 0 or a bad
/// window; NumericalError if the quadrature does not settle.
EmpiricalResult epsilon_empirical(const Trajectory &trajectory, const DetectorWindow &window,
                                  double k, const AmplitudeModel &model,
                                  const QuadratureSpec &quad = {});

/// (1/dOmega) int (1/N) sum_l exp(-i K.r_l) dw for one trajectory.
Complex window_mean_phase(const Trajectory &trajectory, const DetectorWindow &window, double k,
                          const QuadratureSpec &quad = {});

/// Everything known about one parameter point. Estimators that were not run
/// are left empty.
struct DecoherenceReport {
  std::size_t np{0};
  std::optional<double> epsilon_empirical;
  std::optional<double> epsilon_empirical_se;
  std::optional<double> epsilon_gaussian;
  std::optional<double> epsilon_walk_sum;
  double window_term{0.0};
  double prefactor_exponent{0.0};
  Regime regime{Regime::Coherent};
  std::optional<Complex> numerator;
  std::optional<double> denominator;
};

} // namespace dephasing
