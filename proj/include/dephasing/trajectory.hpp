#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dephasing/vec3.hpp"

namespace dephasing {

/// Scatterer parked at one point for every encounter.
struct FixedModel {
  Vec3 position{};
};

/// Random walk with i.i.d. Gaussian steps; `step_length` is the per-axis
/// standard deviation of a single step.
struct GaussianWalkModel {
  double step_length{1.0};
};

/// One (angle, momentum) pair of a Chirikov standard map.
struct MapState {
  double x{0.0};
  double p{0.0};
};

/// Walk driven by three independent standard maps, one per axis. Each step
/// component is `step_length * sin(x_n)` of its map.
struct StandardMapWalkModel {
  double step_length{1.0};
  double kick_strength{7.0};
  /// When empty, each map's (x, p) is drawn uniformly on [0, 2pi) from the seed.
  std::optional<std::array<MapState, 3>> initial_state{};
};

using TrajectoryModel = std::variant<FixedModel, GaussianWalkModel, StandardMapWalkModel>;

std::string model_name(const TrajectoryModel &model);

/// How the positions of one run relate to each other.
///  Walk: r_l is step l of a single walk, so consecutive encounters are
///        correlated.
///  Independent: r_l is the endpoint of its own l-step walk, started from a
///        fresh seed derived from (seed, l). Each r_l has the same law as in
///        Walk mode but the encounters are mutually independent.
enum class Sampling { Walk, Independent };

std::string to_string(Sampling s);
Sampling sampling_from_string(const std::string &s);

/// Scatterer positions r_1 ... r_N, one per incoming particle.
struct Trajectory {
  std::vector<Vec3> positions;
  TrajectoryModel model;
  std::uint64_t seed{0};
  Sampling sampling{Sampling::Walk};

  std::size_t size() const { return positions.size(); }
};

/// Generates `n` positions starting from a walk origin r_0 = 0 (not itself
/// included). Identical (model, n, seed, sampling) give bit-identical output,
/// and a shorter run is always a prefix of a longer one with the same seed.
///
/// Independent sampling costs O(n^2) map iterations for StandardMapWalk; a
/// GaussianWalk endpoint is drawn directly as sqrt(l) times one step.
///
/// Throws std::invalid_argument for n == 0, a non-positive step length,
/// a negative kick strength, or a non-finite fixed position.
Trajectory gen_trajectory(const TrajectoryModel &model, std::size_t n, std::uint64_t seed,
                          Sampling sampling = Sampling::Walk);

} // namespace dephasing
