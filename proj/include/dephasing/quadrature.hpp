#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dephasing/errors.hpp"
#include "dephasing/window.hpp"

namespace dephasing {

/// Tensor-product Gauss-Legendre settings. The order per axis starts at
/// `order` and doubles until two successive estimates of the monitored
/// quantity differ by less than `tolerance`, or `max_order` is exceeded.
struct QuadratureSpec {
  int order{32};
  double tolerance{1e-9};
  int max_order{1024};
};

void validate(const QuadratureSpec &q);

struct LegendreRule {
  std::vector<double> nodes;   ///< on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (cached; thread-safe).
const LegendreRule &gauss_legendre(int order);

/// One quadrature point on the sphere; `weight` already carries sin(theta).
struct AngularNode {
  double theta;
  double phi;
  double weight;
};

std::vector<AngularNode> window_nodes(const DetectorWindow &w, int order);

/// Estimate produced by an adaptive run, with the order that achieved it.
template <class T> struct Refined {
  T value;
  int order;
  double achieved;
};

/// Runs `eval(order)` at doubling orders until `monitor(value)` settles.
/// Throws NumericalError carrying the last achieved difference.
template <class Eval, class Monitor>
auto refine(const QuadratureSpec &spec, Eval &&eval, Monitor &&monitor)
    -> Refined<decltype(eval(0))> {
  validate(spec);
  int order = spec.order;
  auto prev = eval(order);
  double achieved = INFINITY;
  while (2 * order <= spec.max_order) {
    order *= 2;
    auto next = eval(order);
    achieved = std::abs(monitor(next) - monitor(prev));
    prev = std::move(next);
    if (achieved < spec.tolerance)
      return {std::move(prev), order, achieved};
  }
  throw NumericalError("quadrature did not converge: difference " + std::to_string(achieved) +
                           " at order " + std::to_string(order),
                       achieved);
}

} // namespace dephasing
