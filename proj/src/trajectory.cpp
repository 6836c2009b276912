#include "dephasing/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dephasing/seeding.hpp"

namespace dephasing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

void require_step(double step_length) {
  if (!(step_length > 0.0) || !std::isfinite(step_length))
    throw std::invalid_argument("trajectory: step length must be positive and finite");
}

std::vector<Vec3> fixed_positions(const FixedModel &m, std::size_t n) {
  if (!is_finite(m.position))
    throw std::invalid_argument("trajectory: fixed position must be finite");
  return std::vector<Vec3>(n, m.position);
}

std::vector<Vec3> gaussian_walk(const GaussianWalkModel &m, std::size_t n, std::uint64_t seed) {
  require_step(m.step_length);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, m.step_length);

  std::vector<Vec3> out;
  out.reserve(n);
  Vec3 r{};
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = step(rng);
    const double dy = step(rng);
    const double dz = step(rng);
    r += Vec3{dx, dy, dz};
    out.push_back(r);
  }
  return out;
}

std::vector<Vec3> standard_map_walk(const StandardMapWalkModel &m, std::size_t n,
                                    std::uint64_t seed) {
  require_step(m.step_length);
  if (!(m.kick_strength >= 0.0) || !std::isfinite(m.kick_strength))
    throw std::invalid_argument("trajectory: kick strength must be non-negative");

  std::array<MapState, 3> state{};
  if (m.initial_state) {
    state = *m.initial_state;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (auto &s : state) {
      s.x = angle(rng);
      s.p = angle(rng);
    }
  }

  std::vector<Vec3> out;
  out.reserve(n);
  Vec3 r{};
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 3> step{};
    for (std::size_t axis = 0; axis < 3; ++axis) {
      auto &s = state[axis];
      step[axis] = m.step_length * std::sin(s.x);
      // p is kept mod 2pi as well; x only ever sees p mod 2pi.
      s.p = wrap_angle(s.p + m.kick_strength * std::sin(s.x));
      s.x = wrap_angle(s.x + s.p);
    }
    r += Vec3{step[0], step[1], step[2]};
    out.push_back(r);
  }
  return out;
}

std::vector<Vec3> independent_gaussian(const GaussianWalkModel &m, std::size_t n,
                                       std::uint64_t seed) {
  require_step(m.step_length);
  std::vector<Vec3> out;
  out.reserve(n);
  for (std::size_t l = 1; l <= n; ++l) {
    std::mt19937_64 rng(run_seed(seed, l));
    std::normal_distribution<double> step(0.0, m.step_length * std::sqrt(double(l)));
    const double dx = step(rng);
    const double dy = step(rng);
    const double dz = step(rng);
    out.push_back(Vec3{dx, dy, dz});
  }
  return out;
}

std::vector<Vec3> independent_standard_map(const StandardMapWalkModel &m, std::size_t n,
                                           std::uint64_t seed) {
  std::vector<Vec3> out;
  out.reserve(n);
  for (std::size_t l = 1; l <= n; ++l)
    out.push_back(standard_map_walk(m, l, run_seed(seed, l)).back());
  return out;
}

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};

} // namespace

std::string model_name(const TrajectoryModel &model) {
  return std::visit(overloaded{[](const FixedModel &) { return std::string("fixed"); },
                               [](const GaussianWalkModel &) { return std::string("gwalk"); },
                               [](const StandardMapWalkModel &) { return std::string("smap"); }},
                    model);
}

std::string to_string(Sampling s) { return s == Sampling::Walk ? "walk" : "independent"; }

Sampling sampling_from_string(const std::string &s) {
  if (s == "walk")
    return Sampling::Walk;
  if (s == "independent")
    return Sampling::Independent;
  throw std::invalid_argument("unknown sampling mode '" + s + "'");
}

Trajectory gen_trajectory(const TrajectoryModel &model, std::size_t n, std::uint64_t seed,
                          Sampling sampling) {
  if (n == 0)
    throw std::invalid_argument("trajectory: particle count must be at least 1");

  const bool indep = sampling == Sampling::Independent;
  auto positions = std::visit(
      overloaded{[&](const FixedModel &m) { return fixed_positions(m, n); },
                 [&](const GaussianWalkModel &m) {
                   return indep ? independent_gaussian(m, n, seed) : gaussian_walk(m, n, seed);
                 },
                 [&](const StandardMapWalkModel &m) {
                   return indep ? independent_standard_map(m, n, seed)
                                : standard_map_walk(m, n, seed);
                 }},
      model);
  return Trajectory{std::move(positions), model, seed, sampling};
}

} // namespace dephasing
