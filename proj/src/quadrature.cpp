#include "dephasing/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace dephasing {

void validate(const QuadratureSpec &q) {
  if (q.order < 1)
    throw std::invalid_argument("quadrature: order must be at least 1");
  if (!(q.tolerance > 0.0))
    throw std::invalid_argument("quadrature: tolerance must be positive");
  if (q.max_order < q.order)
    throw std::invalid_argument("quadrature: max_order must be >= order");
}

const LegendreRule &gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<LegendreRule>> cache;

  std::lock_guard lock(mutex);
  auto &slot = cache[order];
  if (!slot) {
    auto rule = std::make_unique<LegendreRule>();
    gsl_integration_glfixed_table *table = gsl_integration_glfixed_table_alloc(order);
    if (!table)
      throw std::runtime_error("quadrature: cannot build Gauss-Legendre table");
    rule->nodes.resize(order);
    rule->weights.resize(order);
    for (int i = 0; i < order; ++i)
      gsl_integration_glfixed_point(-1.0, 1.0, i, &rule->nodes[i], &rule->weights[i], table);
    gsl_integration_glfixed_table_free(table);
    slot = std::move(rule);
  }
  return *slot;
}

std::vector<AngularNode> window_nodes(const DetectorWindow &w, int order) {
  const auto &rule = gauss_legendre(order);
  const double th_half = 0.5 * w.dtheta;
  const double th_mid = w.theta0 + th_half;
  const double ph_half = 0.5 * w.dphi;
  const double ph_mid = w.phi0 + ph_half;

  std::vector<AngularNode> out;
  out.reserve(static_cast<std::size_t>(order) * order);
  for (int i = 0; i < order; ++i) {
    const double theta = th_mid + th_half * rule.nodes[i];
    const double wt = th_half * rule.weights[i] * std::sin(theta);
    for (int j = 0; j < order; ++j) {
      const double phi = ph_mid + ph_half * rule.nodes[j];
      out.push_back({theta, phi, wt * ph_half * rule.weights[j]});
    }
  }
  return out;
}

} // namespace dephasing
