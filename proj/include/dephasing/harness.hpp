#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dephasing/decoherence.hpp"
#include "dephasing/quadrature.hpp"
#include "dephasing/scattering.hpp"
#include "dephasing/seeding.hpp"
#include "dephasing/trajectory.hpp"

namespace dephasing {

inline constexpr const char *kToolVersion = "1.0.0";

enum class Command { Adiabatic, Regimes, OneD, Rapid };

std::string_view to_string(Command c);
std::optional<Command> command_from_string(std::string_view name);

/// Bad configuration text or value. `line` is set for syntax errors,
/// `field` for range violations.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string &what, std::optional<int> line = {}, std::string field = {})
      : std::runtime_error(what), line_(line), field_(std::move(field)) {}
  std::optional<int> line() const { return line_; }
  const std::string &field() const { return field_; }

private:
  std::optional<int> line_;
  std::string field_;
};

enum class Estimator { Empirical, Gaussian, WalkSum };
enum class OutputFormat { Csv, Json };

/// Fully resolved description of a batch run. Sweep axes are lists; the
/// grid is their Cartesian product in declaration order.
struct SweepSpec {
  Command command{Command::Adiabatic};

  std::vector<std::uint64_t> np;
  std::vector<double> dl;
  std::vector<double> k;
  std::vector<double> theta0;
  std::vector<double> dtheta;
  std::vector<double> dphi;
  double phi0{0.0};

  TrajectoryModel model{GaussianWalkModel{}};
  Sampling sampling{Sampling::Walk};
  AmplitudeModel amplitude{LowEnergyAmplitude{1.0}};
  std::uint64_t runs{1};
  std::uint64_t base_seed{0};
  std::vector<Estimator> estimators{Estimator::Empirical, Estimator::Gaussian, Estimator::WalkSum};
  QuadratureSpec quadrature{};
  RegimeThresholds thresholds{};

  // oned
  double transmission_modulus{1.0};
  // rapid
  std::vector<double> scattering_length;
  std::vector<double> spread;
  double shifter_threshold{1e-2};
  std::uint64_t lattice_points{16};

  std::string output_path{"-"};
  OutputFormat format{OutputFormat::Csv};
  unsigned workers{1};

  bool uses(Estimator e) const;
};

using ConfigEntries = std::map<std::string, std::string>;

/// Splits `key = value` lines; `#` starts a comment. Throws ConfigError
/// with the line number on malformed or duplicate lines.
ConfigEntries parse_config_entries(const std::string &text);

/// Applies defaults and range checks. Unknown keys and missing required
/// keys are rejected.
SweepSpec resolve_config(const ConfigEntries &entries, Command command);

SweepSpec parse_config(const std::string &text, Command command = Command::Adiabatic);

/// Keys every command understands plus its own; used for help and checks.
std::vector<std::string> known_keys(Command command);
std::vector<std::string> required_keys(Command command);

/// Number formatting for every real output: 9 significant digits,
/// lowercase scientific, locale independent ("8.77441491e-01").
std::string format_real(double v);

using Cell = std::variant<std::monostate, double, std::uint64_t, std::string, bool>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Column order of the adiabatic and regimes commands.
const std::vector<std::string> &adiabatic_columns();

struct SweepResult {
  ResultTable table;
  nlohmann::json manifest;
};

/// Runs every grid point (in parallel over spec.workers) and returns rows
/// in canonical grid order. Output bytes do not depend on the worker count.
SweepResult run_sweep(const SweepSpec &spec);

std::string to_csv(const ResultTable &table);
nlohmann::json to_json(const ResultTable &table);
std::string serialize(const ResultTable &table, OutputFormat format);

/// Writes the table to spec.output_path ("-" is stdout) and, for file
/// output, the manifest next to it as `<out>.manifest.json`.
/// Throws std::runtime_error if the path cannot be written.
void write_outputs(const SweepSpec &spec, const SweepResult &result);

} // namespace dephasing
