#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dephasing/decoherence.hpp"
#include "support/oracles.hpp"

using namespace dephasing;
using std::numbers::pi;

namespace {

DetectorWindow window(double theta0, double dtheta, double dphi = 0.1) {
  return {theta0, 0.0, dtheta, dphi};
}

// Direct arithmetic on the closed form, kept separate from the library path.
double closed_form_by_hand(double y, double theta0, double dtheta) {
  const double a = y * (1.0 - std::cos(theta0));
  const double w = y * (dtheta * std::sin(theta0) + dtheta * dtheta / 2.0 * std::cos(theta0));
  const double v = std::exp(-a) * (1.0 - std::exp(-w)) / w;
  return 1.0 - v * v;
}

} // namespace

TEST_SUITE("decoherence") {

TEST_CASE("closed form spot values") {
  // Frozen from a 30-digit evaluation of the closed form.
  const auto spot = epsilon_gaussian_closed_form(DephasingScale{1.0}, window(pi / 2, 0.1));
  CHECK(spot.epsilon == doctest::Approx(0.8774414907017245).epsilon(1e-13));
  CHECK(std::fabs(spot.epsilon - 0.877442) < 1e-6);
  CHECK(spot.epsilon == doctest::Approx(closed_form_by_hand(1.0, pi / 2, 0.1)).epsilon(1e-12));
  CHECK(spot.prefactor_exponent == doctest::Approx(1.0));
  CHECK(spot.window_term == doctest::Approx(0.1));
  CHECK(spot.regime == Regime::Intermediate);

  const auto coherent =
      epsilon_gaussian_closed_form(DephasingScale{0.01}, window(0.1, 0.05, 0.1));
  CHECK(coherent.epsilon == doctest::Approx(1.6225746565769e-4).epsilon(1e-9));
  CHECK(coherent.regime == Regime::Coherent);

  const auto dephased = epsilon_gaussian_closed_form(DephasingScale{100.0}, window(pi / 2, 0.1));
  CHECK(dephased.epsilon >= 1.0 - 1e-12);
  CHECK(dephased.epsilon <= 1.0);
}

TEST_CASE("closed form from (np, dl, k) matches the scaled form") {
  const auto a = epsilon_gaussian_closed_form(100, 0.1, 1.0, window(pi / 4, 0.1));
  const auto b = epsilon_gaussian_closed_form(DephasingScale{1.0}, window(pi / 4, 0.1));
  CHECK(a.epsilon == doctest::Approx(b.epsilon).epsilon(1e-14));
  CHECK_THROWS_AS(DephasingScale::from(0, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DephasingScale::from(1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DephasingScale::from(1, 0.1, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_gaussian_closed_form(DephasingScale{1.0}, window(pi, 0.1)),
                  std::invalid_argument);
}

TEST_CASE("degenerate window term uses the series limit") {
  // w below 1e-8: eps -> 1 - exp(-2a) (1 - w/2)^2
  const double y = 1e-6;
  const auto r = epsilon_gaussian_closed_form(DephasingScale{y}, window(0.5, 1e-4));
  const double a = y * (1.0 - std::cos(0.5));
  const double w = r.window_term;
  REQUIRE(w < 1e-8);
  const double v = std::exp(-a) * (1.0 - w / 2.0);
  CHECK(r.epsilon == doctest::Approx(1.0 - v * v).epsilon(1e-12));

  // continuity across the switch
  const double lo = epsilon_gaussian_closed_form(DephasingScale{0.99e-8 / 0.1}, window(pi / 2, 0.1)).epsilon;
  const double hi = epsilon_gaussian_closed_form(DephasingScale{1.01e-8 / 0.1}, window(pi / 2, 0.1)).epsilon;
  // for small y, eps ~ 2a + w, so the step is 2 dy (1 - cos) + dy (dtheta sin + ...)
  const double dy = 0.02e-8 / 0.1;
  const double slope = 2.0 + (0.1 + 0.0);
  CHECK(std::fabs((hi - lo) - slope * dy) < 1e-13);

  CHECK(epsilon_gaussian_closed_form(DephasingScale{0.0}, window(0.3, 0.1)).epsilon == 0.0);
}

TEST_CASE("quadrature agrees with an independent adaptive integral over the exact window") {
  for (double y : {0.01, 0.1, 1.0, 10.0})
    for (double t0 : {0.1, pi / 4, pi / 2})
      for (double dt : {0.1, 0.01}) {
        CAPTURE(y);
        CAPTURE(t0);
        CAPTURE(dt);
        CHECK(epsilon_gaussian_quadrature(DephasingScale{y}, window(t0, dt)) ==
              doctest::Approx(oracle::gaussian_epsilon_exact_window(y, t0, dt)).epsilon(1e-9));
      }
  CHECK(epsilon_gaussian_quadrature(DephasingScale{0.0}, window(pi / 2, 0.1)) == 0.0);
}

TEST_CASE("closed form tracks the quadrature within the expansion error") {
  for (double y : {0.01, 0.1, 1.0, 10.0})
    for (double t0 : {0.1, pi / 4, pi / 2}) {
      CAPTURE(y);
      CAPTURE(t0);
      const auto wide = window(t0, 0.1);
      const auto narrow = window(t0, 0.01);
      CHECK(std::fabs(epsilon_gaussian_closed_form(DephasingScale{y}, wide).epsilon -
                      epsilon_gaussian_quadrature(DephasingScale{y}, wide)) < 1e-3);
      CHECK(std::fabs(epsilon_gaussian_closed_form(DephasingScale{y}, narrow).epsilon -
                      epsilon_gaussian_quadrature(DephasingScale{y}, narrow)) < 1e-6);
    }
}

TEST_CASE("closed form is nondecreasing in y and in np") {
  for (double t0 : {0.0, 0.1, pi / 4, pi / 2, 2.5}) {
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
      const double y = std::pow(10.0, -4.0 + 7.0 * i / 400.0);
      const double e = epsilon_gaussian_closed_form(DephasingScale{y}, window(t0, 0.1)).epsilon;
      CHECK(e >= prev);
      CHECK(e >= 0.0);
      CHECK(e <= 1.0);
      prev = e;
    }
  }
  double prev = -1.0;
  for (std::size_t np = 1; np <= 2000; np += 7) {
    const double e = epsilon_gaussian_closed_form(np, 0.05, 1.0, window(pi / 3, 0.1)).epsilon;
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("walk expectation") {
  CHECK(walk_expectation(2, std::log(2.0)) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(walk_expectation(1, 0.7) == doctest::Approx(std::exp(-0.7)).epsilon(1e-14));
  CHECK(walk_expectation(10, 0.0) == 1.0);
  for (std::size_t n : {3u, 17u, 1000u})
    for (double c : {1e-9, 1e-4, 0.3, 5.0}) {
      double brute = 0.0;
      for (std::size_t l = 1; l <= n; ++l)
        brute += std::exp(-static_cast<double>(l) * c);
      CHECK(walk_expectation(n, c) == doctest::Approx(brute / n).epsilon(1e-12));
    }
  CHECK_THROWS_AS(walk_expectation(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(walk_expectation(1, -1.0), std::invalid_argument);
}

TEST_CASE("walk-sum epsilon") {
  // single step: same as the Gaussian model with y = dL^2 k^2
  const auto w = window(pi / 3, 0.1);
  CHECK(epsilon_walk_sum(1, 0.4, 2.0, w) ==
        doctest::Approx(epsilon_gaussian_quadrature(1, 0.4, 2.0, w)).epsilon(1e-12));

  for (unsigned long np : {1ul, 10ul, 300ul}) {
    CAPTURE(np);
    CHECK(epsilon_walk_sum(np, 0.2, 1.5, w) ==
          doctest::Approx(oracle::walk_sum_epsilon_bruteforce(np, 0.2, 1.5, pi / 3, 0.1))
              .epsilon(1e-9));
  }

  const double dl = std::sqrt(25.0 / 1e4);
  const double e = epsilon_walk_sum(10000, dl, 1.0, window(pi / 2, 0.1));
  CHECK(e > 0.99);
  CHECK(e == doctest::Approx(0.99855014003876557).epsilon(1e-9));
  CHECK(epsilon_gaussian_closed_form(10000, dl, 1.0, window(pi / 2, 0.1)).epsilon > 0.99);
}

TEST_CASE("walk-sum epsilon is nondecreasing in np") {
  double prev = -1.0;
  for (std::size_t np = 1; np <= 5000; np = np * 3 / 2 + 1) {
    const double e = epsilon_walk_sum(np, 0.05, 1.0, window(pi / 2, 0.1));
    CHECK(e >= prev - 1e-12);
    prev = e;
  }
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(0.0) == Regime::Coherent);
  CHECK(classify_regime(1.0) == Regime::Intermediate);
  CHECK(classify_regime(100.0) == Regime::Dephased);
  CHECK(classify_regime(0.01) == Regime::Intermediate);
  CHECK(classify_regime(10.0) == Regime::Intermediate);
  CHECK(classify_regime(0.5, {1.0, 2.0}) == Regime::Coherent);
  CHECK_THROWS_AS(classify_regime(-1e-3), std::invalid_argument);
  CHECK_THROWS_AS(classify_regime(NAN), std::invalid_argument);
  CHECK(to_string(Regime::Dephased) == "dephased");
}

TEST_CASE("empirical epsilon vanishes for a scatterer parked at the origin") {
  const auto at_origin = gen_trajectory(FixedModel{}, 50, 0);
  for (const auto &w : {window(pi / 2, 0.1), window(0.0, 0.3, 1.0), window(2.0, 0.5, 3.0)}) {
    const auto r = epsilon_empirical(at_origin, w, 2.0, LowEnergyAmplitude{0.7});
    CHECK(r.epsilon < 1e-12);
    CHECK(r.solid_angle == doctest::Approx(solid_angle(w)).epsilon(1e-12));
  }
  const auto single = gen_trajectory(FixedModel{}, 1, 0);
  CHECK(epsilon_empirical(single, window(1.0, 0.2), 1.0, LowEnergyAmplitude{1.0}).epsilon < 1e-12);
}

TEST_CASE("empirical epsilon stays within [0, 1]") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double t0 = 2.5 * u(rng);
    const DetectorWindow w{t0, 0.0, 0.05 + 0.5 * u(rng), 0.05 + u(rng)};
    const auto traj = gen_trajectory(GaussianWalkModel{0.1 + u(rng)}, 1 + i * 7, i);
    const AmplitudeModel amp =
        i % 2 ? AmplitudeModel{LowEnergyAmplitude{1.0}} : AmplitudeModel{BornGaussianAmplitude{1.0, 0.5}};
    const auto r = epsilon_empirical(traj, w, 0.5 + u(rng), amp);
    CHECK(r.epsilon >= 0.0);
    CHECK(r.epsilon <= 1.0);
    // Cauchy-Schwarz on the raw integrals
    CHECK(std::norm(r.numerator) <= r.solid_angle * r.denominator * (1.0 + 1e-9));
  }
}

TEST_CASE("empirical epsilon with a constant amplitude is 1 - |window mean phase|^2") {
  const auto traj = gen_trajectory(StandardMapWalkModel{0.3, 7.0, {}}, 200, 4);
  const auto w = window(0.7, 0.2, 0.4);
  const auto r = epsilon_empirical(traj, w, 1.3, LowEnergyAmplitude{2.0});
  const Complex p = window_mean_phase(traj, w, 1.3);
  CHECK(r.epsilon == doctest::Approx(1.0 - std::norm(p)).epsilon(1e-10));
}

TEST_CASE("amplitude model drops out for a small window") {
  const auto w = window(pi / 3, 0.05, 0.05);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto traj = gen_trajectory(GaussianWalkModel{0.2}, 100, seed);
    const double le = epsilon_empirical(traj, w, 1.0, LowEnergyAmplitude{1.0}).epsilon;
    // k sigma = 1e-3: the Born amplitude is flat across the window to ~1e-7
    const double bg = epsilon_empirical(traj, w, 1.0, BornGaussianAmplitude{3.0, 1e-3}).epsilon;
    CHECK(std::fabs(le - bg) < 1e-8);
  }
}

TEST_CASE("amplitude-model difference scales with (k sigma)^2") {
  // F0 varies across the window by ~ (k sigma)^2 sin(theta) dtheta, and the
  // epsilon difference is first order in that variation.
  const auto w = window(pi / 3, 0.05, 0.05);
  const auto traj = gen_trajectory(GaussianWalkModel{0.2}, 100, 4);
  const double le = epsilon_empirical(traj, w, 1.0, LowEnergyAmplitude{1.0}).epsilon;
  auto diff = [&](double sigma) {
    return epsilon_empirical(traj, w, 1.0, BornGaussianAmplitude{3.0, sigma}).epsilon - le;
  };
  const double d1 = diff(0.04), d2 = diff(0.02);
  REQUIRE(std::fabs(d1) > 1e-9);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("empirical epsilon signals dephasing for independent encounters") {
  // y = N dL^2 k^2 = 25
  const std::size_t np = 1000;
  const double dl = std::sqrt(25.0 / np);
  const int seeds = 10;
  double indep = 0.0, walk = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const QuadratureSpec q{16, 1e-9, 1024};
    const auto a = gen_trajectory(GaussianWalkModel{dl}, np, 500 + s, Sampling::Independent);
    indep += epsilon_empirical(a, window(pi / 2, 0.1), 1.0, LowEnergyAmplitude{1.0}, q).epsilon;
    const auto b = gen_trajectory(GaussianWalkModel{dl}, np, 500 + s);
    walk += epsilon_empirical(b, window(pi / 2, 0.1), 1.0, LowEnergyAmplitude{1.0}, q).epsilon;
  }
  CHECK(indep / seeds > 0.95);
  // One correlated walk keeps a residual |phase mean|^2 of about 2 / y, so it
  // dephases less than independent encounters do.
  CHECK(walk / seeds < indep / seeds);
  CHECK(walk / seeds > 0.85);
}

TEST_CASE("mean window phase over many walks approaches the walk-sum model") {
  const std::size_t np = 10;
  const double dl = 0.3, k = 1.0;
  const auto w = window(pi / 2, 0.1);
  const int seeds = 400;
  std::vector<double> re;
  for (int s = 0; s < seeds; ++s)
    re.push_back(window_mean_phase(gen_trajectory(GaussianWalkModel{dl}, np, 7000 + s), w, k,
                                   QuadratureSpec{16, 1e-9, 1024})
                     .real());
  double mean = 0.0;
  for (double v : re)
    mean += v;
  mean /= seeds;
  double var = 0.0;
  for (double v : re)
    var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (seeds - 1) / seeds);
  CHECK(std::fabs(mean - window_walk_expectation(np, dl, k, w)) < 3.0 * se);
}

TEST_CASE("empirical error paths") {
  Trajectory empty{{}, FixedModel{}, 0};
  CHECK_THROWS_AS(epsilon_empirical(empty, window(1.0, 0.1), 1.0, LowEnergyAmplitude{1.0}),
                  std::invalid_argument);
  const auto t = gen_trajectory(FixedModel{}, 3, 0);
  CHECK_THROWS_AS(epsilon_empirical(t, window(1.0, 0.1), 0.0, LowEnergyAmplitude{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(epsilon_empirical(t, window(1.0, 0.0), 1.0, LowEnergyAmplitude{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(epsilon_empirical(t, window(1.0, 0.1), 1.0, BornGaussianAmplitude{0.0, 1.0}),
                  UndefinedEpsilonError);
}

}
