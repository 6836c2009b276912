#include "dephasing/rapid_change.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dephasing/errors.hpp"
#include "dephasing/summation.hpp"

namespace dephasing {

namespace {

double &component(Vec3 &v, std::size_t axis) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; }
double component(const Vec3 &v, std::size_t axis) {
  return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
}

// 1D convolution of `field` along `axis` with kernel[|i - j|].
std::vector<double> convolve_axis(const GridSpec &g, const std::vector<double> &field,
                                  std::size_t axis, const std::vector<double> &kernel) {
  std::vector<double> out(field.size(), 0.0);
  const auto &d = g.dims;
  for (std::size_t i = 0; i < d[0]; ++i)
    for (std::size_t j = 0; j < d[1]; ++j)
      for (std::size_t l = 0; l < d[2]; ++l) {
        const std::array<std::size_t, 3> at{i, j, l};
        CompensatedSum acc;
        for (std::size_t m = 0; m < d[axis]; ++m) {
          auto src = at;
          src[axis] = m;
          const std::size_t dist = at[axis] > m ? at[axis] - m : m - at[axis];
          acc.add(kernel[dist] * field[g.index(src[0], src[1], src[2])]);
        }
        out[g.index(i, j, l)] = acc.value();
      }
  return out;
}

} // namespace

GridSpec GridSpec::covering(std::span<const Vec3> samples, std::size_t cells_per_axis) {
  if (samples.empty())
    throw std::invalid_argument("grid: no samples to cover");
  if (cells_per_axis == 0)
    throw std::invalid_argument("grid: cells_per_axis must be positive");

  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -1.0 * lo;
  for (const auto &s : samples)
    for (std::size_t a = 0; a < 3; ++a) {
      component(lo, a) = std::min(component(lo, a), component(s, a));
      component(hi, a) = std::max(component(hi, a), component(s, a));
    }

  double extent = 0.0;
  for (std::size_t a = 0; a < 3; ++a)
    extent = std::max(extent, component(hi, a) - component(lo, a));
  GridSpec g;
  g.cell_size = extent > 0.0 ? extent / static_cast<double>(cells_per_axis) : 1.0;
  for (std::size_t a = 0; a < 3; ++a) {
    const double span = component(hi, a) - component(lo, a);
    g.dims[a] = static_cast<std::size_t>(std::floor(span / g.cell_size)) + 2;
    const double pad = 0.5 * (static_cast<double>(g.dims[a]) * g.cell_size - span);
    component(g.origin, a) = component(lo, a) - pad;
  }
  return g;
}

Vec3 GridSpec::cell_center(std::size_t i, std::size_t j, std::size_t l) const {
  return origin + cell_size * Vec3{static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5,
                                   static_cast<double>(l) + 0.5};
}

double GridField::sum() const {
  CompensatedSum acc;
  for (double v : values)
    acc.add(v);
  return acc.value();
}

OccupationDensity occupation_density(std::span<const Vec3> samples, const GridSpec &grid) {
  if (samples.empty())
    throw std::invalid_argument("occupation: at least one sample is required");
  if (!(grid.cell_size > 0.0) || grid.cell_count() == 0)
    throw std::invalid_argument("occupation: grid must have positive cell size and extent");

  const double m = static_cast<double>(samples.size());
  std::vector<std::size_t> counts(grid.cell_count(), 0);
  std::array<CompensatedSum, 3> first;
  for (const auto &s : samples) {
    std::array<std::size_t, 3> idx{};
    for (std::size_t a = 0; a < 3; ++a) {
      const double u = std::floor((component(s, a) - component(grid.origin, a)) / grid.cell_size);
      if (!(u >= 0.0 && u < static_cast<double>(grid.dims[a])))
        throw OutOfBoundsError("occupation: sample lies outside the grid on axis " +
                               std::to_string(a));
      idx[a] = static_cast<std::size_t>(u);
      first[a].add(component(s, a));
    }
    ++counts[grid.index(idx[0], idx[1], idx[2])];
  }

  Vec3 center{first[0].value() / m, first[1].value() / m, first[2].value() / m};
  std::array<CompensatedSum, 3> second;
  for (const auto &s : samples)
    for (std::size_t a = 0; a < 3; ++a) {
      const double d = component(s, a) - component(center, a);
      second[a].add(d * d);
    }
  Vec3 width{std::sqrt(second[0].value() / m), std::sqrt(second[1].value() / m),
             std::sqrt(second[2].value() / m)};

  GridField mass{grid, std::vector<double>(grid.cell_count(), 0.0)};
  for (std::size_t c = 0; c < counts.size(); ++c)
    mass.values[c] = static_cast<double>(counts[c]) / m;
  return {std::move(mass), center, width};
}

GridMoments grid_moments(const OccupationDensity &density) {
  const auto &g = density.mass.grid;
  std::array<CompensatedSum, 3> first;
  std::array<CompensatedSum, 3> second;
  for (std::size_t i = 0; i < g.dims[0]; ++i)
    for (std::size_t j = 0; j < g.dims[1]; ++j)
      for (std::size_t l = 0; l < g.dims[2]; ++l) {
        const double w = density.mass.at(i, j, l);
        if (w == 0.0)
          continue;
        const Vec3 c = g.cell_center(i, j, l);
        for (std::size_t a = 0; a < 3; ++a) {
          first[a].add(w * component(c, a));
          second[a].add(w * component(c, a) * component(c, a));
        }
      }
  const double total = density.mass.sum();
  GridMoments out{};
  for (std::size_t a = 0; a < 3; ++a) {
    const double mean = first[a].value() / total;
    component(out.center, a) = mean;
    component(out.width, a) = std::sqrt(std::max(0.0, second[a].value() / total - mean * mean));
  }
  return out;
}

EffectivePotential effective_potential(const OccupationDensity &density, double scattering_length) {
  const auto &g = density.mass.grid;
  const double scale = 2.0 * std::numbers::pi * scattering_length / g.cell_volume();
  GridField out{g, density.mass.values};
  for (double &v : out.values)
    v *= scale;
  return {std::move(out), scattering_length, 0.0};
}

EffectivePotential effective_potential_gaussian(const OccupationDensity &density, double strength,
                                                double width) {
  if (!(width > 0.0))
    throw std::invalid_argument("effective potential: kernel width must be positive");
  const auto &g = density.mass.grid;
  const std::size_t longest = std::max({g.dims[0], g.dims[1], g.dims[2]});
  std::vector<double> kernel(longest);
  for (std::size_t d = 0; d < longest; ++d) {
    const double r = static_cast<double>(d) * g.cell_size / width;
    kernel[d] = std::exp(-0.5 * r * r);
  }

  auto field = density.mass.values;
  for (std::size_t axis = 0; axis < 3; ++axis)
    field = convolve_axis(g, field, axis, kernel);
  for (double &v : field)
    v *= strength;
  return {GridField{g, std::move(field)}, 0.0, width};
}

double eikonal_phase(const EffectivePotential &potential, double k, double x, double y) {
  if (!(k > 0.0))
    throw std::invalid_argument("eikonal: k must be positive");
  const auto &g = potential.values.grid;
  const double u = std::floor((x - g.origin.x) / g.cell_size);
  const double v = std::floor((y - g.origin.y) / g.cell_size);
  if (!(u >= 0.0 && u < static_cast<double>(g.dims[0]) && v >= 0.0 &&
        v < static_cast<double>(g.dims[1])))
    throw OutOfBoundsError("eikonal: column lies outside the grid");

  const auto i = static_cast<std::size_t>(u);
  const auto j = static_cast<std::size_t>(v);
  CompensatedSum line;
  for (std::size_t l = 0; l < g.dims[2]; ++l)
    line.add(potential.values.at(i, j, l));
  // hbar = m = 1: velocity k, phase -(1/v) int V dz
  return -line.value() * g.cell_size / k;
}

double phase_shift(double wavelength, double scattering_length, double spread) {
  if (!(wavelength > 0.0))
    throw std::invalid_argument("phase_shift: wavelength must be positive");
  if (!(spread > 0.0))
    throw std::invalid_argument("phase_shift: spread must be positive");
  return -wavelength * scattering_length / (spread * spread);
}

bool is_phase_shifter(double chi, double threshold) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("is_phase_shifter: threshold must be positive");
  return std::fabs(chi) < threshold;
}

double wavelength(double k) {
  if (!(k > 0.0))
    throw std::invalid_argument("wavelength: k must be positive");
  return 2.0 * std::numbers::pi / k;
}

std::vector<Vec3> cube_lattice(const Vec3 &center, double side, std::size_t per_axis) {
  if (per_axis == 0 || !(side > 0.0))
    throw std::invalid_argument("cube_lattice: need a positive side and point count");
  const double h = side / static_cast<double>(per_axis);
  const Vec3 corner = center - Vec3{0.5 * side, 0.5 * side, 0.5 * side};
  std::vector<Vec3> out;
  out.reserve(per_axis * per_axis * per_axis);
  for (std::size_t i = 0; i < per_axis; ++i)
    for (std::size_t j = 0; j < per_axis; ++j)
      for (std::size_t l = 0; l < per_axis; ++l)
        out.push_back(corner + h * Vec3{static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5,
                                        static_cast<double>(l) + 0.5});
  return out;
}

} // namespace dephasing
