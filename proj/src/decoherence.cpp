#include "dephasing/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dephasing/summation.hpp"

namespace dephasing {

namespace {

// 1 - cos(theta) without cancellation near theta = 0.
double one_minus_cos(double theta) {
  const double s = std::sin(0.5 * theta);
  return 2.0 * s * s;
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

void require_wavenumber(double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("decoherence: k must be positive and finite");
}

// Window average of a theta-only integrand, monitored for convergence.
template <class F>
double window_average(const DetectorWindow &window, const QuadratureSpec &quad, F &&integrand) {
  auto eval = [&](int order) {
    CompensatedSum num;
    CompensatedSum den;
    for (const auto &node : window_nodes(window, order)) {
      num.add(node.weight * integrand(node.theta));
      den.add(node.weight);
    }
    return num.value() / den.value();
  };
  return refine(quad, eval, [](double v) { return v; }).value;
}

struct EmpiricalSums {
  Complex numerator;
  double denominator;
  double solid_angle;
  Complex mean_phase; // window-normalised l-average of exp(-i K.r)
};

EmpiricalSums empirical_sums(const Trajectory &trajectory, const DetectorWindow &window, double k,
                             const AmplitudeModel &model, int order) {
  CompensatedComplexSum numerator;
  CompensatedComplexSum phase_total;
  CompensatedSum denominator;
  CompensatedSum omega;
  const double inv_n = 1.0 / static_cast<double>(trajectory.size());

  for (const auto &node : window_nodes(window, order)) {
    const Vec3 momentum = momentum_transfer({k, node.theta, node.phi});
    const Complex base = base_amplitude(model, k, norm(momentum));

    CompensatedComplexSum phase_sum;
    CompensatedSum intensity_sum;
    for (const auto &r : trajectory.positions) {
      const Complex f = base * phase_factor(momentum, r);
      phase_sum.add(f);
      intensity_sum.add(std::norm(f));
    }
    const Complex mean_amplitude = phase_sum.value() * inv_n;
    numerator.add(node.weight * mean_amplitude);
    denominator.add(node.weight * intensity_sum.value() * inv_n);
    omega.add(node.weight);
    if (base != Complex{})
      phase_total.add(node.weight * mean_amplitude / base);
  }
  const double solid = omega.value();
  return {numerator.value(), denominator.value(), solid, phase_total.value() / solid};
}

void check_empirical_inputs(const Trajectory &trajectory, const DetectorWindow &window, double k) {
  if (trajectory.positions.empty())
    throw std::invalid_argument("decoherence: trajectory is empty");
  require_wavenumber(k);
  validate(window);
}

} // namespace

std::string_view to_string(Regime r) {
  switch (r) {
  case Regime::Coherent:
    return "coherent";
  case Regime::Intermediate:
    return "intermediate";
  case Regime::Dephased:
    return "dephased";
  }
  return "unknown";
}

Regime classify_regime(double window_term, const RegimeThresholds &thresholds) {
  if (!(window_term >= 0.0))
    throw std::invalid_argument("regime: window term must be non-negative");
  if (window_term < thresholds.coherent)
    return Regime::Coherent;
  if (window_term > thresholds.dephased)
    return Regime::Dephased;
  return Regime::Intermediate;
}

DephasingScale DephasingScale::from(std::size_t np, double step_length, double k) {
  if (np == 0)
    throw std::invalid_argument("decoherence: np must be at least 1");
  if (!(step_length > 0.0) || !std::isfinite(step_length))
    throw std::invalid_argument("decoherence: step length must be positive and finite");
  require_wavenumber(k);
  const double dk = step_length * k;
  return {static_cast<double>(np) * dk * dk};
}

ClosedFormResult epsilon_gaussian_closed_form(DephasingScale scale, const DetectorWindow &window,
                                              const RegimeThresholds &thresholds) {
  validate(window);
  if (!(scale.y >= 0.0))
    throw std::invalid_argument("decoherence: y must be non-negative");

  const double a = scale.y * one_minus_cos(window.theta0);
  const double w = scale.y * expanded_polar_extent(window);
  const double spread = w < 1e-8 ? 1.0 - 0.5 * w : -std::expm1(-w) / w;
  const double visibility = std::exp(-a) * spread;
  return {clamp_unit(1.0 - visibility * visibility), a, w, classify_regime(w, thresholds)};
}

ClosedFormResult epsilon_gaussian_closed_form(std::size_t np, double step_length, double k,
                                              const DetectorWindow &window,
                                              const RegimeThresholds &thresholds) {
  return epsilon_gaussian_closed_form(DephasingScale::from(np, step_length, k), window, thresholds);
}

double epsilon_gaussian_quadrature(DephasingScale scale, const DetectorWindow &window,
                                   const QuadratureSpec &quad) {
  validate(window);
  if (!(scale.y >= 0.0))
    throw std::invalid_argument("decoherence: y must be non-negative");
  const double v = window_average(
      window, quad, [y = scale.y](double theta) { return std::exp(-y * one_minus_cos(theta)); });
  return clamp_unit(1.0 - v * v);
}

double epsilon_gaussian_quadrature(std::size_t np, double step_length, double k,
                                   const DetectorWindow &window, const QuadratureSpec &quad) {
  return epsilon_gaussian_quadrature(DephasingScale::from(np, step_length, k), window, quad);
}

double walk_expectation(std::size_t np, double c) {
  if (np == 0)
    throw std::invalid_argument("decoherence: np must be at least 1");
  if (!(c >= 0.0))
    throw std::invalid_argument("decoherence: decay rate must be non-negative");
  if (c == 0.0)
    return 1.0;
  const double n = static_cast<double>(np);
  // e^{-c} (1 - e^{-Nc}) / (N (1 - e^{-c}))
  return std::exp(-c) * std::expm1(-n * c) / (n * std::expm1(-c));
}

double window_walk_expectation(std::size_t np, double step_length, double k,
                               const DetectorWindow &window, const QuadratureSpec &quad) {
  DephasingScale::from(np, step_length, k); // argument checks
  validate(window);
  const double dk2 = step_length * step_length * k * k;
  // dL^2 K^2 / 2 with K^2 = 2 k^2 (1 - cos theta)
  return window_average(window, quad, [&](double theta) {
    return walk_expectation(np, dk2 * one_minus_cos(theta));
  });
}

double epsilon_walk_sum(std::size_t np, double step_length, double k, const DetectorWindow &window,
                        const QuadratureSpec &quad) {
  const double v = window_walk_expectation(np, step_length, k, window, quad);
  return clamp_unit(1.0 - v * v);
}

EmpiricalResult epsilon_empirical(const Trajectory &trajectory, const DetectorWindow &window,
                                  double k, const AmplitudeModel &model,
                                  const QuadratureSpec &quad) {
  check_empirical_inputs(trajectory, window, k);
  validate(model);

  auto ratio = [](const EmpiricalSums &s) {
    if (s.denominator == 0.0)
      return 1.0;
    return std::norm(s.numerator) / (s.solid_angle * s.denominator);
  };
  auto refined = refine(
      quad, [&](int order) { return empirical_sums(trajectory, window, k, model, order); }, ratio);

  const auto &s = refined.value;
  if (s.denominator == 0.0)
    throw UndefinedEpsilonError("decoherence: amplitude vanishes over the whole window");
  return {clamp_unit(1.0 - ratio(s)), s.numerator, s.denominator, s.solid_angle, refined.order};
}

Complex window_mean_phase(const Trajectory &trajectory, const DetectorWindow &window, double k,
                          const QuadratureSpec &quad) {
  check_empirical_inputs(trajectory, window, k);
  // A unit constant amplitude turns the l-averaged amplitude into the phase.
  const AmplitudeModel unit = LowEnergyAmplitude{-1.0 / k};
  auto refined = refine(
      quad, [&](int order) { return empirical_sums(trajectory, window, k, unit, order); },
      [](const EmpiricalSums &s) { return s.mean_phase; });
  return refined.value.mean_phase;
}

} // namespace dephasing
