#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

#include "pebounds/cli/commands.hpp"
#include "pebounds/cli/config.hpp"
#include "pebounds/cli/table.hpp"
#include "pebounds/error.hpp"
#include "pebounds/reference.hpp"

using namespace pebounds;
using namespace pebounds::cli;

namespace {

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

template <class T>
T cell(const Table& t, std::size_t row, const std::string& name) {
  return std::get<T>(t.rows[row][column(t, name)]);
}

}  // namespace

TEST_CASE("fig1 defaults") {
  const RunConfig c = parse_config(R"({"command": "fig1"})");
  CHECK(c.command == Command::fig1);
  CHECK(c.theta == doctest::Approx(std::numbers::pi / 4));
  CHECK(c.spacing == doctest::Approx(std::numbers::pi / 6));
  CHECK(c.n_values == std::vector<int>{3, 4, 5});
  CHECK(c.m_values.size() == 30);
  CHECK(c.r == 1.0);
  CHECK(c.format == OutputFormat::csv);
}

TEST_CASE("config overrides and ranges") {
  const RunConfig c = parse_config(R"({
    "command": "fig2", "m_range": {"min": 2, "max": 4}, "r": 0.9,
    "tolerances": {"rank": 1e-9, "divergence": 1e-7}, "format": "json"})");
  CHECK(c.m_values == std::vector<int>{2, 3, 4});
  CHECK(c.r == 0.9);
  CHECK(c.tol.rank == 1e-9);
  CHECK(c.tol.divergence == 1e-7);
  CHECK(c.format == OutputFormat::json);
}

TEST_CASE("config errors name the location") {
  try {
    parse_config("{\n  \"command\": \"fig1\",\n  \"m_values\": [1, 2,]\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("config:3:") != std::string::npos);
  }
  try {
    parse_config(R"({"command": "fig1", "colour": 1})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"command": "fig9"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"command": "fig1", "seed": 1.5})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"command": "bound"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"command": "fig1", "tolerances": {"bogus": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("bound command: poisson two-point example") {
  const RunConfig c = parse_config(R"({
    "command": "bound", "theta": 0.1,
    "model": {"family": "poisson", "m": 1, "theta_min": 0.1},
    "constraints": {"kind": "barankin", "test_points": [0.1, 1.0]}})");
  const Table t = run_bound(c);
  REQUIRE(t.rows.size() == 1);
  CHECK(cell<std::string>(t, 0, "status") == "finite");
  CHECK(cell<double>(t, 0, "value") == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("bound command: crb kind on the qubit") {
  const RunConfig c = parse_config(R"({
    "command": "bound", "theta": 1.0,
    "model": {"family": "qubit", "m": 3, "r": 0.8},
    "constraints": {"kind": "crb"}})");
  const Table t = run_bound(c);
  CHECK(cell<double>(t, 0, "value") == doctest::Approx(qubit_crb(1.0, 3, 0.8)).epsilon(1e-10));
}

TEST_CASE("bound command: too many points diverge with diagnostics") {
  const RunConfig c = parse_config(R"({
    "command": "bound", "theta": 0.5,
    "model": {"family": "qubit", "m": 1},
    "constraints": {"kind": "barankin", "spacing": 0.4, "n": 3}})");
  const Table t = run_bound(c);
  CHECK(cell<std::string>(t, 0, "status") == "divergent");
  CHECK(std::holds_alternative<std::monostate>(t.rows[0][column(t, "value")]));
  CHECK(cell<double>(t, 0, "kernel_projection_norm") > 0);
  CHECK(cell<std::int64_t>(t, 0, "n") == 3);
}

TEST_CASE("fig1 table rows are sorted and divergent cells carry diagnostics") {
  RunConfig c = parse_config(R"({"command": "fig1", "m_values": [4, 1, 2]})");
  const Table t = run_fig1(c);
  REQUIRE(t.rows.size() == 9);
  CHECK(t.columns == std::vector<std::string>{"m", "n", "status", "bound", "crb", "rank", "kernel_projection_norm"});
  std::int64_t prev_m = 0, prev_n = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto m = cell<std::int64_t>(t, i, "m");
    const auto n = cell<std::int64_t>(t, i, "n");
    CHECK((m > prev_m || (m == prev_m && n > prev_n)));
    prev_m = m;
    prev_n = n;
    const bool divergent = cell<std::string>(t, i, "status") == "divergent";
    CHECK(divergent == (m + 1 < n));
    if (divergent) CHECK(cell<double>(t, i, "kernel_projection_norm") > 0);
    CHECK(cell<double>(t, i, "crb") == doctest::Approx(qubit_crb(std::numbers::pi / 4, static_cast<int>(m))));
  }
}

TEST_CASE("fig3 ratios") {
  RunConfig c = parse_config(R"({"command": "fig3", "m_values": [1, 4], "thetas": [0.7], "samples": 20,
                                 "tolerances": {"quadrature_nodes": 2001}})");
  const auto out = run_fig3(c);
  REQUIRE(out.table.rows.size() == 2);
  CHECK(out.samples.rows.size() == 40);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(cell<double>(out.table, i, "barankin_ratio") >= 1.0);
    const int m = static_cast<int>(cell<std::int64_t>(out.table, i, "m"));
    CHECK(cell<double>(out.table, i, "mle_ratio") ==
          doctest::Approx(poisson_mle_variance(0.7, m) / poisson_crb(0.7, m)));
  }
  // small-m mle at theta = 0.7 sits below the crb
  CHECK(cell<double>(out.table, 0, "mle_ratio") < 1.0);
}

TEST_CASE("quantum check agrees with the closed form") {
  const RunConfig c = parse_config(R"({"command": "quantum-check", "thetas": [0.2, 0.6]})");
  const Table t = run_quantum_check(c);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double exact = cell<double>(t, i, "qfi_closed_form");
    CHECK(cell<double>(t, i, "qfi_pure") == doctest::Approx(exact).epsilon(1e-8));
    CHECK(cell<double>(t, i, "classical_fisher") == doctest::Approx(exact).epsilon(1e-8));
    CHECK(cell<double>(t, i, "q_regularized_limit") == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("csv and json rendering") {
  Table t;
  t.columns = {"a", "b", "c", "d"};
  t.add_row({std::int64_t{3}, 0.1, std::monostate{}, std::string("x")});
  t.add_row({std::int64_t{-1}, 1e-300, true, std::string("y")});
  CHECK(render_csv(t) == "a,b,c,d\n3,0.10000000000000001,,x\n-1,1e-300,true,y\n");
  const auto j = nlohmann::json::parse(render_json(t));
  REQUIRE(j.is_array());
  CHECK(j[0]["a"] == 3);
  CHECK(j[0]["b"].get<double>() == 0.1);
  CHECK(j[0]["c"].is_null());
  CHECK(j[1]["c"] == true);
  CHECK_THROWS_AS(t.add_row({std::int64_t{1}}), std::logic_error);
}
