// dephasing: batch driver for dephasing-by-chaos sweeps.
//
//   dephasing adiabatic --np 1,10,100 --dl 0.1 --k 1 --theta0 pi/2 --dtheta 0.1 --dphi 0.1
//   dephasing regimes   --config sweep.cfg --format json --out regimes.json
//   dephasing oned      --np 10000 --dl 1 --k 1 --runs 20
//   dephasing rapid     --k 6.283185307 --b 0.01 --dr 10,100,1000

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "dephasing/errors.hpp"
#include "dephasing/harness.hpp"

namespace {

struct Flag {
  const char *name;
  const char *key;
  const char *help;
};

// Flags shared by the sweep commands; each maps onto a config key.
const Flag kFlags[] = {
    {"--np", "np", "particle counts, comma separated"},
    {"--dl", "dl", "walk step lengths"},
    {"--k", "k", "incident wavenumbers"},
    {"--theta0", "theta0", "window polar start angles (accepts pi/2 etc.)"},
    {"--dtheta", "dtheta", "window polar widths"},
    {"--dphi", "dphi", "window azimuthal widths"},
    {"--phi0", "phi0", "window azimuthal start"},
    {"--model", "model", "trajectory model: fixed, gwalk, smap"},
    {"--kick", "kick", "standard-map kick strength"},
    {"--sampling", "sampling", "walk (one correlated walk) or independent (fresh walk per encounter)"},
    {"--position", "position", "fixed scatterer position x,y,z"},
    {"--seed", "seed", "base seed"},
    {"--runs", "runs", "seeds per grid point"},
    {"--estimators", "estimators", "subset of empirical,gaussian,walksum"},
    {"--amplitude", "amplitude", "amplitude model: lowenergy, borngaussian"},
    {"--b", "b", "scattering length(s)"},
    {"--v0", "v0", "Born-Gaussian strength"},
    {"--sigma", "sigma", "Born-Gaussian width"},
    {"--t0", "t0", "transmission modulus (oned)"},
    {"--dr", "dr", "cloud widths (rapid)"},
    {"--threshold", "threshold", "phase-shifter threshold (rapid)"},
    {"--lattice", "lattice", "lattice points per axis for the uniform cloud (rapid)"},
    {"--quad-order", "quad_order", "initial Gauss-Legendre order per axis"},
    {"--quad-tol", "quad_tol", "quadrature convergence tolerance"},
    {"--coherent-threshold", "coherent_threshold", "regime boundary on x (coherent)"},
    {"--dephased-threshold", "dephased_threshold", "regime boundary on x (dephased)"},
    {"--out", "out", "output path, '-' for stdout"},
    {"--format", "format", "csv or json"},
    {"--workers", "workers", "worker threads"},
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Quantum dephasing by a chaotically moving scatterer"};
  app.require_subcommand(1);

  struct Sub {
    dephasing::Command command;
    CLI::App *app;
    std::string config;
    std::map<std::string, std::string> values;
  };
  std::vector<Sub> subs;
  subs.reserve(4);
  const std::pair<dephasing::Command, const char *> commands[] = {
      {dephasing::Command::Adiabatic, "3D decoherence sweeps (empirical, Gaussian, walk-sum)"},
      {dephasing::Command::Regimes, "closed-form-only regime sweeps"},
      {dephasing::Command::OneD, "1D transmission-ensemble experiments"},
      {dephasing::Command::Rapid, "occupation density, effective potential and phase shift"},
  };
  for (const auto &[command, description] : commands) {
    auto *sub = app.add_subcommand(std::string(dephasing::to_string(command)), description);
    subs.push_back({command, sub, {}, {}});
  }
  for (auto &s : subs) {
    s.app->add_option("--config", s.config, "key = value config file");
    const auto known = dephasing::known_keys(s.command);
    for (const auto &flag : kFlags)
      if (std::find(known.begin(), known.end(), flag.key) != known.end())
        s.app->add_option(flag.name, s.values[flag.key], flag.help);
  }

  CLI11_PARSE(app, argc, argv);

  for (auto &s : subs) {
    if (!s.app->parsed())
      continue;
    try {
      dephasing::ConfigEntries entries;
      if (!s.config.empty())
        entries = dephasing::parse_config_entries(read_file(s.config));
      for (const auto &flag : kFlags) {
        auto it = s.values.find(flag.key);
        if (it != s.values.end() && s.app->count(flag.name) > 0)
          entries[flag.key] = it->second;
      }
      const auto spec = dephasing::resolve_config(entries, s.command);
      dephasing::write_outputs(spec, dephasing::run_sweep(spec));
    } catch (const dephasing::ConfigError &e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}
