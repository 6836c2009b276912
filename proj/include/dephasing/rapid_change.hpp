#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dephasing/vec3.hpp"

namespace dephasing {

/// Uniform Cartesian grid of cubic cells. Cell (i, j, l) spans
/// [origin + (i, j, l) * cell_size, origin + (i+1, j+1, l+1) * cell_size).
struct GridSpec {
  Vec3 origin{};
  double cell_size{1.0};
  std::array<std::size_t, 3> dims{1, 1, 1};

  /// Smallest grid with `cells_per_axis` cells along the longest extent of
  /// the samples' bounding box, padded by half a cell on every side.
  static GridSpec covering(std::span<const Vec3> samples, std::size_t cells_per_axis);

  std::size_t cell_count() const { return dims[0] * dims[1] * dims[2]; }
  double cell_volume() const { return cell_size * cell_size * cell_size; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t l) const {
    return (i * dims[1] + j) * dims[2] + l;
  }
  Vec3 cell_center(std::size_t i, std::size_t j, std::size_t l) const;
};

/// Scalar field sampled on a GridSpec.
struct GridField {
  GridSpec grid;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j, std::size_t l) const { return values[grid.index(i, j, l)]; }
  double sum() const;
};

/// Time-averaged occupation of the scatterer during one passage: each cell
/// holds the fraction of samples that fell in it.
struct OccupationDensity {
  GridField mass;
  Vec3 center; ///< sample mean
  Vec3 width;  ///< per-axis sample standard deviation (1/M normalisation)

  /// Probability per unit volume in a cell.
  double density(std::size_t i, std::size_t j, std::size_t l) const {
    return mass.at(i, j, l) / mass.grid.cell_volume();
  }
};

/// Throws std::invalid_argument with no samples and OutOfBoundsError when a
/// sample lies outside the grid.
OccupationDensity occupation_density(std::span<const Vec3> samples, const GridSpec &grid);

struct GridMoments {
  Vec3 center;
  Vec3 width;
};

/// Mean and per-axis spread of the binned mass, using cell centres.
GridMoments grid_moments(const OccupationDensity &density);

/// Averaged potential felt by a particle crossing the occupation cloud.
struct EffectivePotential {
  GridField values;
  double scattering_length{0.0}; ///< b of the contact form; 0 for finite-range kernels
  double kernel_width{0.0};      ///< Gaussian kernel width; 0 for the contact form
};

/// Contact interaction 2 pi b delta(r) averaged over the cloud: 2 pi b W(r).
EffectivePotential effective_potential(const OccupationDensity &density, double scattering_length);

/// Finite-range V(r) = strength exp(-r^2 / 2 width^2) convolved with the
/// binned cloud (mass-weighted sum over cells, separable per axis).
EffectivePotential effective_potential_gaussian(const OccupationDensity &density, double strength,
                                                double width);

/// Eikonal phase -(1/k) int V dz along the grid column through (x, y).
/// Throws OutOfBoundsError when (x, y) misses the grid.
double eikonal_phase(const EffectivePotential &potential, double k, double x, double y);

/// Phase shift -lambda b / dR^2 of a dilute cloud of width dR.
/// Throws std::invalid_argument for non-positive lambda or dR.
double phase_shift(double wavelength, double scattering_length, double spread);

/// True when |chi| stays below `threshold` (> 0), i.e. the cloud only shifts
/// the phase.
bool is_phase_shifter(double chi, double threshold);

double wavelength(double k);

/// One point at every cell centre of an n^3 lattice filling the cube of
/// side `side` centred on `center`.
std::vector<Vec3> cube_lattice(const Vec3 &center, double side, std::size_t per_axis);

} // namespace dephasing
