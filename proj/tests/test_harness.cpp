#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "dephasing/harness.hpp"

using namespace dephasing;

namespace {

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');)
    out.push_back(f);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

const char *kMinimal = "np = 10\ndl = 0.1\nk = 1\ntheta0 = 0.5\ndtheta = 0.1\ndphi = 0.1\n";

} // namespace

TEST_SUITE("harness") {

TEST_CASE("empty config lists the required keys") {
  try {
    parse_config("");
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    const std::string msg = e.what();
    for (const char *key : {"np", "dl", "k", "theta0", "dtheta", "dphi"})
      CHECK(msg.find(key) != std::string::npos);
  }
}

TEST_CASE("minimal config resolves with defaults") {
  const auto s = parse_config(kMinimal);
  CHECK(s.np == std::vector<std::uint64_t>{10});
  CHECK(s.quadrature.order == 32);
  CHECK(s.quadrature.tolerance == 1e-9);
  CHECK(s.thresholds.coherent == 0.01);
  CHECK(s.thresholds.dephased == 10.0);
  CHECK(s.runs == 1);
  CHECK(s.format == OutputFormat::Csv);
  CHECK(model_name(s.model) == "gwalk");
  CHECK(s.uses(Estimator::Empirical));
  CHECK(s.uses(Estimator::Gaussian));
  CHECK(s.uses(Estimator::WalkSum));
}

TEST_CASE("list and pi syntax") {
  const auto s = parse_config(std::string(kMinimal) + "# comment line\nphi0 = 0\n" +
                              "estimators = gaussian, walksum\n");
  CHECK(s.estimators.size() == 2);
  auto e = parse_config_entries("np = 1,10,100\ntheta0 = pi/2, 2*pi/3, pi/4\n");
  e["dl"] = "0.1";
  e["k"] = "1";
  e["dtheta"] = "0.1";
  e["dphi"] = "0.1";
  const auto t = resolve_config(e, Command::Adiabatic);
  CHECK(t.np == std::vector<std::uint64_t>{1, 10, 100});
  REQUIRE(t.theta0.size() == 3);
  CHECK(t.theta0[0] == doctest::Approx(std::numbers::pi / 2));
  CHECK(t.theta0[1] == doctest::Approx(2 * std::numbers::pi / 3));
  CHECK(t.theta0[2] == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("syntax errors carry the line number") {
  try {
    parse_config_entries("np = 1\n\nthis line is wrong\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    REQUIRE(e.line());
    CHECK(*e.line() == 3);
  }
  try {
    parse_config_entries("np = 1\nnp = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(*e.line() == 2);
  }
}

TEST_CASE("range violations name the field") {
  auto field_of = [](const std::string &extra) {
    try {
      parse_config(std::string(kMinimal) + extra);
    } catch (const ConfigError &e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of("runs = 0\n") == "runs");
  CHECK(field_of("model = brownian\n") == "model");
  CHECK(field_of("format = xml\n") == "format");
  CHECK(field_of("bogus = 1\n") == "bogus");
  CHECK(field_of("estimators = empirical, magic\n") == "estimators");
  CHECK(field_of("kick = 3\n") == "kick");
  CHECK(field_of("quad_order = 0\n") == "quad_order");

  CHECK_THROWS_AS(parse_config("np = 0\ndl = 0.1\nk = 1\ntheta0 = 0.5\ndtheta = 0.1\ndphi = 0.1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("np = 1\ndl = -1\nk = 1\ntheta0 = 0.5\ndtheta = 0.1\ndphi = 0.1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("np = 1\ndl = 1\nk = 1\ntheta0 = 3.1\ndtheta = 0.1\ndphi = 0.1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("np = 1\ndl = 1\nk = abc\ntheta0 = 0.1\ndtheta = 0.1\ndphi = 0.1\n"),
                  ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_real(0.8774414907017245) == "8.77441491e-01");
  CHECK(format_real(0.0) == "0.00000000e+00");
  CHECK(format_real(-1e-4) == "-1.00000000e-04");
  CHECK(format_real(123456789012.0) == "1.23456789e+11");
  CHECK(format_real(1e-300) == "1.00000000e-300");
}

TEST_CASE("seed derivation") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(point_seed(1, 0) != point_seed(1, 1));
  CHECK(point_seed(1, 0) != point_seed(2, 0));
  CHECK(run_seed(point_seed(1, 0), 0) != run_seed(point_seed(1, 0), 1));
  CHECK(run_seed(5, 3) == run_seed(5, 3));
}

TEST_CASE("single fixed point with the empirical estimator") {
  auto s = parse_config(std::string(kMinimal) + "model = fixed\nestimators = empirical\n");
  const auto r = run_sweep(s);
  const auto csv = to_csv(r.table);
  const auto ls = lines(csv);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] ==
        "model,np,dl,k,theta0,dtheta,dphi,seed,runs,eps_empirical_mean,eps_empirical_se,"
        "eps_gaussian,eps_walksum,window_term_x,regime");
  const auto f = fields(ls[1]);
  REQUIRE(f.size() == 15);
  CHECK(f[0] == "fixed");
  CHECK(f[1] == "10");
  CHECK(f[9] == "0.00000000e+00");
  CHECK(f[10].empty()); // one run: no standard error
  CHECK(f[11].empty());
  CHECK(f[12].empty());
  CHECK(f[14] == "coherent");
}

TEST_CASE("sampling mode is configurable and labelled") {
  CHECK(parse_config(kMinimal).sampling == Sampling::Walk);
  auto s = parse_config(std::string(kMinimal) + "sampling = independent\nestimators = empirical\n");
  CHECK(s.sampling == Sampling::Independent);
  const auto r = run_sweep(s);
  CHECK(fields(lines(to_csv(r.table))[1])[0] == "gwalk/independent");
  CHECK(r.manifest["parameters"]["sampling"] == "independent");
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "sampling = iid\n"), ConfigError);
}

TEST_CASE("np sweep of the Gaussian estimator is nondecreasing") {
  auto s = parse_config(
      "np = 1, 10, 100, 1000, 10000\ndl = 0.05\nk = 1\ntheta0 = pi/2\ndtheta = 0.1\n"
      "dphi = 0.1\nestimators = gaussian\n");
  const auto ls = lines(to_csv(run_sweep(s).table));
  REQUIRE(ls.size() == 6);
  double prev = -1.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const double e = std::stod(fields(ls[i])[11]);
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("sweeps are reproducible byte for byte across worker counts") {
  const std::string cfg =
      "np = 5, 40\ndl = 0.2, 0.4\nk = 1\ntheta0 = 0.3, pi/2\ndtheta = 0.1\ndphi = 0.2\n"
      "runs = 4\nseed = 77\nmodel = smap\nquad_order = 8\n";
  auto one = parse_config(cfg + "workers = 1\n");
  auto many = parse_config(cfg + "workers = 3\n");
  const auto a = to_csv(run_sweep(one).table);
  const auto b = to_csv(run_sweep(one).table);
  const auto c = to_csv(run_sweep(many).table);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(lines(a).size() == 9);
}

TEST_CASE("json rows use the csv field names") {
  auto s = parse_config(std::string(kMinimal) + "estimators = gaussian\nformat = json\n");
  const auto j = to_json(run_sweep(s).table);
  REQUIRE(j.size() == 1);
  for (const auto &col : adiabatic_columns())
    CHECK(j[0].contains(col));
  CHECK(j[0]["eps_empirical_mean"].is_null());
  CHECK(j[0]["eps_gaussian"].is_number());
  CHECK(j[0]["np"] == 10);
}

TEST_CASE("regimes command runs only the closed form") {
  auto s = parse_config("np = 1\ndl = 1\nk = 10\ntheta0 = pi/2\ndtheta = 0.1\ndphi = 0.1\n",
                        Command::Regimes);
  const auto f = fields(lines(to_csv(run_sweep(s).table))[1]);
  CHECK(f[9].empty());
  CHECK(f[12].empty());
  CHECK(std::stod(f[11]) > 0.99);
  CHECK(f[14] == "intermediate");
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "estimators = empirical\n", Command::Regimes),
                  ConfigError);
}

TEST_CASE("oned command") {
  auto s = parse_config("np = 50\ndl = 1\nk = 1\nmodel = fixed\nt0 = 0.8\n", Command::OneD);
  auto t = run_sweep(s).table;
  REQUIRE(t.rows.size() == 1);
  CHECK(std::get<double>(t.rows[0][7]) == doctest::Approx(0.64));
  CHECK(std::get<double>(t.rows[0][8]) == 0.0);
  CHECK(std::get<double>(t.rows[0][10]) == doctest::Approx(1.8 * 1.8));

  auto walk = parse_config("np = 10000\ndl = 1\nk = 1\nruns = 3\n", Command::OneD);
  auto w = run_sweep(walk).table;
  CHECK(std::get<double>(w.rows[0][8]) > 0.99);
}

TEST_CASE("rapid command") {
  auto s = parse_config("k = 2*pi\nb = 0.01\ndr = 10, 100\nlattice = 8\n", Command::Rapid);
  auto t = run_sweep(s).table;
  REQUIRE(t.rows.size() == 2);
  CHECK(std::get<double>(t.rows[0][4]) == doctest::Approx(-1e-4));
  CHECK(std::get<double>(t.rows[0][5]) == doctest::Approx(-1e-4).epsilon(1e-10));
  CHECK(std::get<bool>(t.rows[0][6]));
  CHECK(to_csv(t).rfind("k,lambda,b,dr,chi,chi_eikonal,phase_shifter\n", 0) == 0);
}

TEST_CASE("outputs and manifest are written side by side") {
  const auto dir = std::filesystem::temp_directory_path() / "dephasing_harness_test";
  std::filesystem::create_directories(dir);
  auto s = parse_config(std::string(kMinimal) + "runs = 2\nseed = 9\n");
  s.output_path = (dir / "out.csv").string();
  const auto r = run_sweep(s);
  write_outputs(s, r);
  std::ifstream csv(s.output_path);
  std::stringstream body;
  body << csv.rdbuf();
  CHECK(body.str() == to_csv(r.table));

  std::ifstream mf(s.output_path + ".manifest.json");
  const auto m = nlohmann::json::parse(mf);
  CHECK(m["base_seed"] == 9);
  CHECK(m["version"] == kToolVersion);
  REQUIRE(m["points"].size() == 1);
  CHECK(m["points"][0]["run_seeds"].size() == 2);
  CHECK(m["points"][0]["point_seed"] == point_seed(9, 0));
  CHECK(m["parameters"]["quadrature"]["order"] == 32);

  s.output_path = (dir / "missing" / "deeper" / "out.csv").string();
  CHECK_THROWS_AS(write_outputs(s, r), std::runtime_error);
  std::filesystem::remove_all(dir);
}

}
