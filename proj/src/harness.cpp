#include "dephasing/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "dephasing/parallel.hpp"
#include "dephasing/rapid_change.hpp"
#include "dephasing/summation.hpp"
#include "dephasing/transmission.hpp"

namespace dephasing {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(std::string_view(s).substr(start, comma - start)));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

double plain_real(const std::string &field, std::string_view token) {
  double v = 0.0;
  const auto *end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ConfigError(field + ": '" + std::string(token) + "' is not a finite number", {}, field);
  return v;
}

// Accepts plain numbers and the forms pi, c*pi, pi/d, c*pi/d.
double parse_real(const std::string &field, const std::string &token) {
  const auto at = token.find("pi");
  if (at == std::string::npos)
    return plain_real(field, token);

  double scale = 1.0;
  if (at > 0) {
    std::string_view head(token.data(), at);
    if (head.back() != '*')
      throw ConfigError(field + ": malformed multiple of pi '" + token + "'", {}, field);
    scale = plain_real(field, head.substr(0, head.size() - 1));
  }
  std::string_view tail = std::string_view(token).substr(at + 2);
  if (!tail.empty()) {
    if (tail.front() != '/')
      throw ConfigError(field + ": malformed fraction of pi '" + token + "'", {}, field);
    const double div = plain_real(field, tail.substr(1));
    if (div == 0.0)
      throw ConfigError(field + ": division by zero in '" + token + "'", {}, field);
    scale /= div;
  }
  return scale * std::numbers::pi;
}

std::uint64_t parse_uint(const std::string &field, const std::string &token) {
  std::uint64_t v = 0;
  const auto *end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(field + ": '" + token + "' is not a non-negative integer", {}, field);
  return v;
}

std::vector<double> real_list(const std::string &field, const std::string &value) {
  std::vector<double> out;
  for (const auto &t : split_list(value))
    out.push_back(parse_real(field, t));
  return out;
}

std::vector<std::uint64_t> uint_list(const std::string &field, const std::string &value) {
  std::vector<std::uint64_t> out;
  for (const auto &t : split_list(value))
    out.push_back(parse_uint(field, t));
  return out;
}

template <class T, class Pred>
void require_all(const std::string &field, const std::vector<T> &values, Pred ok,
                 const char *rule) {
  for (const auto &v : values)
    if (!ok(v))
      throw ConfigError(field + ": every value must be " + rule, {}, field);
}

void require(bool ok, const std::string &field, const std::string &rule) {
  if (!ok)
    throw ConfigError(field + ": " + rule, {}, field);
}

const std::vector<std::string> &common_keys() {
  static const std::vector<std::string> keys{"out", "format", "workers"};
  return keys;
}

const std::vector<std::string> &walk_keys() {
  static const std::vector<std::string> keys{"np",   "dl",   "k",    "model",   "kick",
                                             "position", "runs", "seed", "sampling"};
  return keys;
}

const std::vector<std::string> &window_keys() {
  static const std::vector<std::string> keys{"theta0",   "dtheta",         "dphi",
                                             "phi0",     "quad_order",     "quad_tol",
                                             "quad_max_order", "coherent_threshold",
                                             "dephased_threshold"};
  return keys;
}

std::string join(const std::vector<std::string> &v) {
  std::string out;
  for (const auto &s : v)
    out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

struct MeanSe {
  double mean;
  std::optional<double> se;
};

MeanSe mean_se(const std::vector<double> &v) {
  CompensatedSum s;
  for (double x : v)
    s.add(x);
  const double n = static_cast<double>(v.size());
  const double mean = s.value() / n;
  if (v.size() < 2)
    return {mean, std::nullopt};
  CompensatedSum d;
  for (double x : v)
    d.add((x - mean) * (x - mean));
  return {mean, std::sqrt(d.value() / (n - 1.0) / n)};
}

double round_to_output(double v) {
  const std::string text = format_real(v);
  double out = v;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

Cell opt(const std::optional<double> &v) { return v ? Cell{*v} : Cell{}; }

std::string estimator_name(Estimator e) {
  switch (e) {
  case Estimator::Empirical:
    return "empirical";
  case Estimator::Gaussian:
    return "gaussian";
  case Estimator::WalkSum:
    return "walksum";
  }
  return "";
}

nlohmann::json model_json(const TrajectoryModel &m) {
  nlohmann::json j{{"name", model_name(m)}};
  if (const auto *f = std::get_if<FixedModel>(&m))
    j["position"] = {f->position.x, f->position.y, f->position.z};
  if (const auto *g = std::get_if<GaussianWalkModel>(&m))
    j["step_length"] = g->step_length;
  if (const auto *s = std::get_if<StandardMapWalkModel>(&m)) {
    j["step_length"] = s->step_length;
    j["kick_strength"] = s->kick_strength;
  }
  return j;
}

nlohmann::json parameters_json(const SweepSpec &spec) {
  nlohmann::json p;
  p["command"] = std::string(to_string(spec.command));
  p["np"] = spec.np;
  p["dl"] = spec.dl;
  p["k"] = spec.k;
  p["theta0"] = spec.theta0;
  p["dtheta"] = spec.dtheta;
  p["dphi"] = spec.dphi;
  p["phi0"] = spec.phi0;
  p["model"] = model_json(spec.model);
  p["sampling"] = to_string(spec.sampling);
  if (const auto *le = std::get_if<LowEnergyAmplitude>(&spec.amplitude))
    p["amplitude"] = {{"name", "lowenergy"}, {"b", le->scattering_length}};
  else {
    const auto &g = std::get<BornGaussianAmplitude>(spec.amplitude);
    p["amplitude"] = {{"name", "borngaussian"}, {"v0", g.strength}, {"sigma", g.width}};
  }
  p["runs"] = spec.runs;
  std::vector<std::string> est;
  for (auto e : spec.estimators)
    est.push_back(estimator_name(e));
  p["estimators"] = est;
  p["quadrature"] = {{"order", spec.quadrature.order},
                     {"tolerance", spec.quadrature.tolerance},
                     {"max_order", spec.quadrature.max_order}};
  p["thresholds"] = {{"coherent", spec.thresholds.coherent},
                     {"dephased", spec.thresholds.dephased}};
  p["t0"] = spec.transmission_modulus;
  p["b"] = spec.scattering_length;
  p["dr"] = spec.spread;
  p["threshold"] = spec.shifter_threshold;
  p["lattice"] = spec.lattice_points;
  p["format"] = spec.format == OutputFormat::Csv ? "csv" : "json";
  return p;
}

// The model column also names the sampling mode when it is not the default.
std::string model_label(const SweepSpec &spec) {
  const auto name = model_name(spec.model);
  return spec.sampling == Sampling::Walk ? name : name + "/" + to_string(spec.sampling);
}

// Replaces the walk step length of the configured model.
TrajectoryModel with_step(const TrajectoryModel &m, double dl) {
  if (std::holds_alternative<GaussianWalkModel>(m))
    return GaussianWalkModel{dl};
  if (const auto *s = std::get_if<StandardMapWalkModel>(&m)) {
    auto copy = *s;
    copy.step_length = dl;
    return copy;
  }
  return m;
}

struct WindowPoint {
  std::uint64_t np;
  double dl, k, theta0, dtheta, dphi;
};

std::vector<WindowPoint> window_grid(const SweepSpec &s) {
  std::vector<WindowPoint> g;
  for (auto np : s.np)
    for (double dl : s.dl)
      for (double k : s.k)
        for (double t0 : s.theta0)
          for (double dt : s.dtheta)
            for (double dp : s.dphi)
              g.push_back({np, dl, k, t0, dt, dp});
  return g;
}

nlohmann::json seed_entry(std::uint64_t g, std::uint64_t point, const std::vector<std::uint64_t> &runs) {
  return {{"grid_index", g}, {"point_seed", point}, {"run_seeds", runs}};
}

SweepResult run_window_sweep(const SweepSpec &spec, nlohmann::json manifest) {
  const auto grid = window_grid(spec);
  const bool empirical = spec.command == Command::Adiabatic && spec.uses(Estimator::Empirical);
  const bool gaussian = spec.command == Command::Regimes || spec.uses(Estimator::Gaussian);
  const bool walksum = spec.command == Command::Adiabatic && spec.uses(Estimator::WalkSum);
  const std::uint64_t runs = spec.runs;

  std::vector<std::uint64_t> point_seeds(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    point_seeds[g] = point_seed(spec.base_seed, g);

  std::vector<double> eps(empirical ? grid.size() * runs : 0);
  if (empirical) {
    parallel_for(eps.size(), spec.workers, [&](std::size_t task) {
      const std::size_t g = task / runs;
      const std::uint64_t r = task % runs;
      const auto &p = grid[g];
      const auto traj =
          gen_trajectory(with_step(spec.model, p.dl), p.np, run_seed(point_seeds[g], r),
                         spec.sampling);
      eps[task] = epsilon_empirical(traj, {p.theta0, spec.phi0, p.dtheta, p.dphi}, p.k,
                                    spec.amplitude, spec.quadrature)
                      .epsilon;
    });
  }

  std::vector<std::vector<Cell>> rows(grid.size());
  parallel_for(grid.size(), spec.workers, [&](std::size_t g) {
    const auto &p = grid[g];
    const DetectorWindow window{p.theta0, spec.phi0, p.dtheta, p.dphi};
    const auto closed = epsilon_gaussian_closed_form(p.np, p.dl, p.k, window, spec.thresholds);

    DecoherenceReport report;
    report.np = p.np;
    report.window_term = closed.window_term;
    report.prefactor_exponent = closed.prefactor_exponent;
    report.regime = closed.regime;
    if (gaussian)
      report.epsilon_gaussian = closed.epsilon;
    if (walksum)
      report.epsilon_walk_sum = epsilon_walk_sum(p.np, p.dl, p.k, window, spec.quadrature);
    if (empirical) {
      const std::vector<double> slice(eps.begin() + static_cast<std::ptrdiff_t>(g * runs),
                                      eps.begin() + static_cast<std::ptrdiff_t>((g + 1) * runs));
      const auto stats = mean_se(slice);
      report.epsilon_empirical = stats.mean;
      report.epsilon_empirical_se = stats.se;
    }

    rows[g] = {model_label(spec),
               Cell{p.np},
               Cell{p.dl},
               Cell{p.k},
               Cell{p.theta0},
               Cell{p.dtheta},
               Cell{p.dphi},
               Cell{point_seeds[g]},
               Cell{runs},
               opt(report.epsilon_empirical),
               opt(report.epsilon_empirical_se),
               opt(report.epsilon_gaussian),
               opt(report.epsilon_walk_sum),
               Cell{report.window_term},
               std::string(to_string(report.regime))};
  });

  auto &points = manifest["points"];
  points = nlohmann::json::array();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<std::uint64_t> rs;
    if (empirical)
      for (std::uint64_t r = 0; r < runs; ++r)
        rs.push_back(run_seed(point_seeds[g], r));
    points.push_back(seed_entry(g, point_seeds[g], rs));
  }
  return {{adiabatic_columns(), std::move(rows)}, std::move(manifest)};
}

SweepResult run_oned_sweep(const SweepSpec &spec, nlohmann::json manifest) {
  struct Point {
    std::uint64_t np;
    double dl, k;
  };
  std::vector<Point> grid;
  for (auto np : spec.np)
    for (double dl : spec.dl)
      for (double k : spec.k)
        grid.push_back({np, dl, k});

  const std::uint64_t runs = spec.runs;
  std::vector<std::uint64_t> point_seeds(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    point_seeds[g] = point_seed(spec.base_seed, g);

  std::vector<TransmissionStats> stats(grid.size() * runs);
  parallel_for(stats.size(), spec.workers, [&](std::size_t task) {
    const std::size_t g = task / runs;
    const auto &p = grid[g];
    const auto traj =
        gen_trajectory(with_step(spec.model, p.dl), p.np,
                       run_seed(point_seeds[g], task % runs), spec.sampling);
    // Branch A picks up the path-length phase of the scatterer displaced along the beam.
    std::vector<Complex> ensemble;
    ensemble.reserve(traj.size());
    for (const auto &r : traj.positions)
      ensemble.push_back(spec.transmission_modulus * std::polar(1.0, -p.k * r.z));
    stats[task] = epsilon_1d(ensemble);
  });

  ResultTable table{{"model", "np", "dl", "k", "t0", "seed", "runs", "t", "eps_1d_mean",
                     "eps_1d_se", "pbar_mean", "pbar_se"},
                    {}};
  auto &points = manifest["points"];
  points = nlohmann::json::array();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> t, e, pbar;
    std::vector<std::uint64_t> rs;
    for (std::uint64_t r = 0; r < runs; ++r) {
      const auto &s = stats[g * runs + r];
      t.push_back(s.transmission);
      e.push_back(s.epsilon);
      pbar.push_back(accumulated_distribution(s));
      rs.push_back(run_seed(point_seeds[g], r));
    }
    const auto te = mean_se(t), ee = mean_se(e), pe = mean_se(pbar);
    const auto &p = grid[g];
    table.rows.push_back({model_label(spec), Cell{p.np}, Cell{p.dl}, Cell{p.k},
                          Cell{spec.transmission_modulus}, Cell{point_seeds[g]}, Cell{runs},
                          Cell{te.mean}, Cell{ee.mean}, opt(ee.se), Cell{pe.mean}, opt(pe.se)});
    points.push_back(seed_entry(g, point_seeds[g], rs));
  }
  return {std::move(table), std::move(manifest)};
}

SweepResult run_rapid_sweep(const SweepSpec &spec, nlohmann::json manifest) {
  ResultTable table{{"k", "lambda", "b", "dr", "chi", "chi_eikonal", "phase_shifter"}, {}};
  const std::size_t n = spec.lattice_points;
  for (double k : spec.k)
    for (double b : spec.scattering_length)
      for (double dr : spec.spread) {
        const double lambda = wavelength(k);
        const double chi = phase_shift(lambda, b, dr);

        // Uniform cube of side dr binned on a grid that coincides with the cube.
        const auto samples = cube_lattice({}, dr, n);
        GridSpec grid;
        grid.cell_size = dr / static_cast<double>(n);
        grid.origin = Vec3{-0.5 * dr, -0.5 * dr, -0.5 * dr};
        grid.dims = {n, n, n};
        const auto potential = effective_potential(occupation_density(samples, grid), b);
        const double chi_eik = eikonal_phase(potential, k, 0.0, 0.0);

        table.rows.push_back({Cell{k}, Cell{lambda}, Cell{b}, Cell{dr}, Cell{chi}, Cell{chi_eik},
                              Cell{is_phase_shifter(chi, spec.shifter_threshold)}});
      }
  manifest["points"] = nlohmann::json::array();
  return {std::move(table), std::move(manifest)};
}

} // namespace

std::string_view to_string(Command c) {
  switch (c) {
  case Command::Adiabatic:
    return "adiabatic";
  case Command::Regimes:
    return "regimes";
  case Command::OneD:
    return "oned";
  case Command::Rapid:
    return "rapid";
  }
  return "";
}

std::optional<Command> command_from_string(std::string_view name) {
  for (auto c : {Command::Adiabatic, Command::Regimes, Command::OneD, Command::Rapid})
    if (to_string(c) == name)
      return c;
  return std::nullopt;
}

bool SweepSpec::uses(Estimator e) const {
  return std::find(estimators.begin(), estimators.end(), e) != estimators.end();
}

std::vector<std::string> known_keys(Command command) {
  std::vector<std::string> keys = common_keys();
  auto append = [&](const std::vector<std::string> &more) {
    keys.insert(keys.end(), more.begin(), more.end());
  };
  switch (command) {
  case Command::Adiabatic:
    append(walk_keys());
    append(window_keys());
    append({"estimators", "amplitude", "b", "v0", "sigma"});
    break;
  case Command::Regimes:
    append({"np", "dl", "k"});
    append(window_keys());
    break;
  case Command::OneD:
    append(walk_keys());
    append({"t0"});
    break;
  case Command::Rapid:
    append({"k", "b", "dr", "threshold", "lattice"});
    break;
  }
  return keys;
}

std::vector<std::string> required_keys(Command command) {
  switch (command) {
  case Command::Adiabatic:
  case Command::Regimes:
    return {"np", "dl", "k", "theta0", "dtheta", "dphi"};
  case Command::OneD:
    return {"np", "dl", "k"};
  case Command::Rapid:
    return {"k", "b", "dr"};
  }
  return {};
}

ConfigEntries parse_config_entries(const std::string &text) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": missing key", line_no);
    if (value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": missing value for '" + key + "'",
                        line_no, key);
    if (!entries.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'",
                        line_no, key);
  }
  return entries;
}

SweepSpec resolve_config(const ConfigEntries &entries, Command command) {
  const auto known = known_keys(command);
  for (const auto &[key, value] : entries)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key '" + key + "' for command " + std::string(to_string(command)),
                        {}, key);

  std::vector<std::string> missing;
  for (const auto &key : required_keys(command))
    if (!entries.count(key))
      missing.push_back(key);
  if (!missing.empty())
    throw ConfigError("missing required keys: " + join(missing), {}, missing.front());

  auto get = [&](const std::string &key) -> const std::string * {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto real = [&](const std::string &key, double fallback) {
    const auto *v = get(key);
    return v ? parse_real(key, *v) : fallback;
  };
  auto uint = [&](const std::string &key, std::uint64_t fallback) {
    const auto *v = get(key);
    return v ? parse_uint(key, *v) : fallback;
  };

  SweepSpec s;
  s.command = command;
  if (const auto *v = get("np")) {
    s.np = uint_list("np", *v);
    require_all("np", s.np, [](auto n) { return n >= 1; }, "at least 1");
  }
  if (const auto *v = get("dl")) {
    s.dl = real_list("dl", *v);
    require_all("dl", s.dl, [](double x) { return x > 0.0; }, "positive");
  }
  if (const auto *v = get("k")) {
    s.k = real_list("k", *v);
    require_all("k", s.k, [](double x) { return x > 0.0; }, "positive");
  }
  if (const auto *v = get("theta0"))
    s.theta0 = real_list("theta0", *v);
  if (const auto *v = get("dtheta"))
    s.dtheta = real_list("dtheta", *v);
  if (const auto *v = get("dphi"))
    s.dphi = real_list("dphi", *v);
  s.phi0 = real("phi0", 0.0);

  require_all("theta0", s.theta0,
              [](double x) { return x >= 0.0 && x < std::numbers::pi; }, "in [0, pi)");
  require_all("dtheta", s.dtheta, [](double x) { return x > 0.0; }, "positive");
  require_all("dphi", s.dphi, [](double x) { return x > 0.0 && x <= 2.0 * std::numbers::pi; },
              "in (0, 2pi]");
  for (double t0 : s.theta0)
    for (double dt : s.dtheta)
      require(t0 + dt <= std::numbers::pi * (1.0 + 1e-15), "dtheta",
              "theta0 + dtheta must not exceed pi");
  require(s.phi0 >= 0.0 && s.phi0 < 2.0 * std::numbers::pi, "phi0", "must lie in [0, 2pi)");

  const std::string model = get("model") ? *get("model") : "gwalk";
  const double kick = real("kick", 7.0);
  require(kick >= 0.0, "kick", "must be non-negative");
  if (model == "fixed") {
    Vec3 pos{};
    if (const auto *v = get("position")) {
      const auto xyz = real_list("position", *v);
      require(xyz.size() == 3, "position", "expects three comma-separated values");
      pos = {xyz[0], xyz[1], xyz[2]};
    }
    s.model = FixedModel{pos};
  } else if (model == "gwalk") {
    s.model = GaussianWalkModel{};
  } else if (model == "smap") {
    s.model = StandardMapWalkModel{1.0, kick, std::nullopt};
  } else {
    throw ConfigError("model: expected one of fixed, gwalk, smap", {}, "model");
  }
  require(model == "fixed" || !get("position"), "position", "only valid with model = fixed");
  require(model == "smap" || !get("kick"), "kick", "only valid with model = smap");
  if (const auto *v = get("sampling")) {
    require(*v == "walk" || *v == "independent", "sampling", "expected walk or independent");
    s.sampling = sampling_from_string(*v);
  }

  s.runs = uint("runs", 1);
  require(s.runs >= 1, "runs", "must be at least 1");
  s.base_seed = uint("seed", 0);

  if (const auto *v = get("estimators")) {
    s.estimators.clear();
    for (const auto &name : split_list(*v)) {
      Estimator e;
      if (name == "empirical")
        e = Estimator::Empirical;
      else if (name == "gaussian")
        e = Estimator::Gaussian;
      else if (name == "walksum")
        e = Estimator::WalkSum;
      else
        throw ConfigError("estimators: unknown estimator '" + name + "'", {}, "estimators");
      if (!s.uses(e))
        s.estimators.push_back(e);
    }
  }
  if (command == Command::Regimes)
    s.estimators = {Estimator::Gaussian};

  const std::string amplitude = get("amplitude") ? *get("amplitude") : "lowenergy";
  if (amplitude == "lowenergy") {
    s.amplitude = LowEnergyAmplitude{real("b", 1.0)};
  } else if (amplitude == "borngaussian") {
    const double sigma = real("sigma", 1.0);
    require(sigma > 0.0, "sigma", "must be positive");
    s.amplitude = BornGaussianAmplitude{real("v0", 1.0), sigma};
  } else {
    throw ConfigError("amplitude: expected lowenergy or borngaussian", {}, "amplitude");
  }

  s.quadrature.order = static_cast<int>(uint("quad_order", 32));
  s.quadrature.tolerance = real("quad_tol", 1e-9);
  s.quadrature.max_order = static_cast<int>(uint("quad_max_order", 1024));
  require(s.quadrature.order >= 1, "quad_order", "must be at least 1");
  require(s.quadrature.tolerance > 0.0, "quad_tol", "must be positive");
  require(s.quadrature.max_order >= s.quadrature.order, "quad_max_order",
          "must be at least quad_order");

  s.thresholds.coherent = real("coherent_threshold", 0.01);
  s.thresholds.dephased = real("dephased_threshold", 10.0);
  require(s.thresholds.coherent >= 0.0, "coherent_threshold", "must be non-negative");
  require(s.thresholds.dephased >= s.thresholds.coherent, "dephased_threshold",
          "must be at least coherent_threshold");

  s.transmission_modulus = real("t0", 1.0);
  require(s.transmission_modulus > 0.0, "t0", "must be positive");

  if (command == Command::Rapid) {
    s.scattering_length = real_list("b", *get("b"));
    s.spread = real_list("dr", *get("dr"));
    require_all("dr", s.spread, [](double x) { return x > 0.0; }, "positive");
    s.shifter_threshold = real("threshold", 1e-2);
    require(s.shifter_threshold > 0.0, "threshold", "must be positive");
    s.lattice_points = uint("lattice", 16);
    require(s.lattice_points >= 1 && s.lattice_points <= 256, "lattice", "must lie in [1, 256]");
  }

  if (const auto *v = get("out"))
    s.output_path = *v;
  const std::string format = get("format") ? *get("format") : "csv";
  if (format == "csv")
    s.format = OutputFormat::Csv;
  else if (format == "json")
    s.format = OutputFormat::Json;
  else
    throw ConfigError("format: expected csv or json", {}, "format");

  s.workers = static_cast<unsigned>(uint("workers", 1));
  require(s.workers >= 1, "workers", "must be at least 1");
  return s;
}

SweepSpec parse_config(const std::string &text, Command command) {
  return resolve_config(parse_config_entries(text), command);
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 8);
  return std::string(buf, res.ptr);
}

const std::vector<std::string> &adiabatic_columns() {
  static const std::vector<std::string> cols{
      "model",  "np",   "dl",      "k",    "theta0",           "dtheta",
      "dphi",   "seed", "runs",    "eps_empirical_mean", "eps_empirical_se", "eps_gaussian",
      "eps_walksum", "window_term_x", "regime"};
  return cols;
}

SweepResult run_sweep(const SweepSpec &spec) {
  nlohmann::json manifest;
  manifest["tool"] = "dephasing";
  manifest["version"] = kToolVersion;
  manifest["timestamp"] = iso_timestamp();
  manifest["base_seed"] = spec.base_seed;
  manifest["parameters"] = parameters_json(spec);
  manifest["seed_derivation"] =
      "point = splitmix64(splitmix64(base) ^ grid_index); run = splitmix64(point ^ "
      "splitmix64(run_index + 1))";

  switch (spec.command) {
  case Command::Adiabatic:
  case Command::Regimes:
    return run_window_sweep(spec, std::move(manifest));
  case Command::OneD:
    return run_oned_sweep(spec, std::move(manifest));
  case Command::Rapid:
    return run_rapid_sweep(spec, std::move(manifest));
  }
  throw std::logic_error("run_sweep: unknown command");
}

std::string to_csv(const ResultTable &table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out += (c ? "," : "") + table.columns[c];
  out += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c)
        out += ',';
      std::visit(
          [&](const auto &v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              out += format_real(v);
            else if constexpr (std::is_same_v<T, std::uint64_t>)
              out += std::to_string(v);
            else if constexpr (std::is_same_v<T, std::string>)
              out += v;
            else if constexpr (std::is_same_v<T, bool>)
              out += v ? "true" : "false";
          },
          row[c]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const ResultTable &table) {
  auto rows = nlohmann::json::array();
  for (const auto &row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      auto &slot = obj[table.columns[c]];
      std::visit(
          [&](const auto &v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
              slot = nullptr;
            else if constexpr (std::is_same_v<T, double>)
              // Same 9-digit rounding as the CSV.
              slot = round_to_output(v);
            else
              slot = v;
          },
          row[c]);
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::string serialize(const ResultTable &table, OutputFormat format) {
  if (format == OutputFormat::Csv)
    return to_csv(table);
  return to_json(table).dump(2) + "\n";
}

void write_outputs(const SweepSpec &spec, const SweepResult &result) {
  const std::string body = serialize(result.table, spec.format);
  if (spec.output_path == "-") {
    std::cout << body;
    return;
  }
  {
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out || !(out << body) || !out.flush())
      throw std::runtime_error("cannot write output file '" + spec.output_path + "'");
  }
  const std::string manifest_path = spec.output_path + ".manifest.json";
  std::ofstream m(manifest_path, std::ios::binary);
  if (!m || !(m << result.manifest.dump(2) << '\n') || !m.flush())
    throw std::runtime_error("cannot write manifest '" + manifest_path + "'");
}

} // namespace dephasing
