#include "pebounds/cli/config.hpp"

#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "pebounds/error.hpp"

namespace pebounds::cli {
namespace {

using nlohmann::json;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

void reject_unknown(const json& object, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("config field '" + path + key + "': unknown field");
    }
  }
}

template <class T>
T field(const json& object, const std::string& key, const std::string& path) {
  if constexpr (std::is_integral_v<T>) {
    if (!object.at(key).is_number_integer()) {
      throw ConfigError("config field '" + path + key + "': expected an integer");
    }
  }
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + path + key + "': " + e.what());
  }
}

Command parse_command(const std::string& name) {
  static const std::map<std::string, Command> names{{"fig1", Command::fig1},
                                                    {"fig2", Command::fig2},
                                                    {"fig3", Command::fig3},
                                                    {"bound", Command::bound},
                                                    {"quantum-check", Command::quantum_check}};
  const auto it = names.find(name);
  if (it == names.end()) throw ConfigError("config field 'command': unknown command '" + name + "'");
  return it->second;
}

ConstraintSpec parse_constraints(const json& j) {
  if (!j.is_object()) throw ConfigError("config field 'constraints': expected an object");
  reject_unknown(j, {"kind", "test_points", "spacing", "n"}, "constraints.");
  ConstraintSpec spec;
  const auto kind = field<std::string>(j, "kind", "constraints.");
  if (kind == "barankin") {
    spec.kind = ConstraintKind::barankin;
  } else if (kind == "ecrb") {
    spec.kind = ConstraintKind::ecrb;
  } else if (kind == "crb") {
    spec.kind = ConstraintKind::crb;
  } else {
    throw ConfigError("config field 'constraints.kind': expected barankin, ecrb or crb");
  }
  if (j.contains("test_points")) spec.test_points = field<std::vector<double>>(j, "test_points", "constraints.");
  if (j.contains("spacing")) spec.spacing = field<double>(j, "spacing", "constraints.");
  if (j.contains("n")) spec.n = field<int>(j, "n", "constraints.");
  const bool rule = spec.spacing.has_value() || spec.n.has_value();
  if (spec.kind != ConstraintKind::crb) {
    if (!spec.test_points.empty() && rule) {
      throw ConfigError("config field 'constraints': give either test_points or spacing/n, not both");
    }
    if (spec.test_points.empty() && !(spec.spacing && spec.n)) {
      throw ConfigError("config field 'constraints': needs test_points or both spacing and n");
    }
  }
  return spec;
}

void apply_defaults(RunConfig& c, const json& doc) {
  const bool figure = c.command == Command::fig1 || c.command == Command::fig2;
  if (!doc.contains("theta")) {
    if (figure) c.theta = std::numbers::pi / 4.0;
  }
  if (!doc.contains("spacing")) c.spacing = std::numbers::pi / 6.0;
  if (c.n_values.empty()) c.n_values = {3, 4, 5};
  if (c.m_values.empty()) {
    if (c.command == Command::fig3) {
      c.m_values = {1, 2, 3, 5, 7, 10, 15, 20, 30, 50, 70, 100, 150, 200};
    } else {
      for (int m = 1; m <= 30; ++m) c.m_values.push_back(m);
    }
  }
  if (c.thetas.empty()) {
    c.thetas = c.command == Command::quantum_check ? std::vector<double>{0.1, 0.3, 0.5, 0.9}
                                                   : std::vector<double>{0.1, 0.7};
  }
  if (c.epsilons.empty()) c.epsilons = {1e-3, 1e-4, 1e-5};
}

void validate(const RunConfig& c, const json& doc) {
  for (int m : c.m_values) {
    if (m < 1) throw ConfigError("config field 'm_values': entries must be >= 1");
  }
  for (int n : c.n_values) {
    if (n < 1) throw ConfigError("config field 'n_values': entries must be >= 1");
  }
  if (!(c.r > 0.0 && c.r <= 1.0)) throw ConfigError("config field 'r': must lie in (0, 1]");
  if (c.samples == 0) throw ConfigError("config field 'samples': must be >= 1");
  if (c.quadrature_nodes < 3 || c.quadrature_nodes % 2 == 0) {
    throw ConfigError("config field 'tolerances.quadrature_nodes': must be odd and >= 3");
  }
  if (!(c.tol.rank > 0.0) || !(c.tol.divergence > 0.0) || !(c.tol.support >= 0.0)) {
    throw ConfigError("config field 'tolerances': thresholds must be positive (support >= 0)");
  }
  if (c.command == Command::bound) {
    if (!c.model) throw ConfigError("config field 'model': required by command 'bound'");
    if (!c.constraints) throw ConfigError("config field 'constraints': required by command 'bound'");
    if (!doc.contains("theta")) throw ConfigError("config field 'theta': required by command 'bound'");
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("config field 'epsilons': entries must lie in (0, 1)");
  }
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::fig1: return "fig1";
    case Command::fig2: return "fig2";
    case Command::fig3: return "fig3";
    case Command::bound: return "bound";
    case Command::quantum_check: return "quantum-check";
  }
  return "fig1";
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config:" + line_column(text, e.byte == 0 ? 0 : e.byte - 1) +
                      ": parse error: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  reject_unknown(doc,
                 {"command", "model", "constraints", "theta", "m_range", "m_values", "n_values",
                  "thetas", "r", "spacing", "seed", "samples", "truncation", "epsilons",
                  "tolerances", "output", "samples_output", "format"},
                 "");

  RunConfig c;
  c.command = parse_command(field<std::string>(doc, "command", ""));
  if (doc.contains("model")) {
    try {
      c.model = model_from_json(doc["model"]);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("config field 'model': ") + e.what());
    }
  }
  if (doc.contains("constraints")) c.constraints = parse_constraints(doc["constraints"]);
  if (doc.contains("theta")) c.theta = field<double>(doc, "theta", "");
  if (doc.contains("m_range") && doc.contains("m_values")) {
    throw ConfigError("config field 'm_range': give either m_range or m_values");
  }
  if (doc.contains("m_range")) {
    const json& range = doc["m_range"];
    if (!range.is_object()) throw ConfigError("config field 'm_range': expected {\"min\": .., \"max\": ..}");
    reject_unknown(range, {"min", "max"}, "m_range.");
    const int lo = field<int>(range, "min", "m_range.");
    const int hi = field<int>(range, "max", "m_range.");
    if (lo < 1 || hi < lo) throw ConfigError("config field 'm_range': need 1 <= min <= max");
    for (int m = lo; m <= hi; ++m) c.m_values.push_back(m);
  }
  if (doc.contains("m_values")) c.m_values = field<std::vector<int>>(doc, "m_values", "");
  if (doc.contains("n_values")) c.n_values = field<std::vector<int>>(doc, "n_values", "");
  if (doc.contains("thetas")) c.thetas = field<std::vector<double>>(doc, "thetas", "");
  if (doc.contains("r")) c.r = field<double>(doc, "r", "");
  if (doc.contains("spacing")) c.spacing = field<double>(doc, "spacing", "");
  if (doc.contains("seed")) c.seed = field<std::uint64_t>(doc, "seed", "");
  if (doc.contains("samples")) c.samples = field<std::size_t>(doc, "samples", "");
  if (doc.contains("truncation")) c.truncation = field<std::size_t>(doc, "truncation", "");
  if (doc.contains("epsilons")) c.epsilons = field<std::vector<double>>(doc, "epsilons", "");
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("config field 'tolerances': expected an object");
    reject_unknown(t, {"support", "rank", "divergence", "quadrature_nodes"}, "tolerances.");
    if (t.contains("support")) c.tol.support = field<double>(t, "support", "tolerances.");
    if (t.contains("rank")) c.tol.rank = field<double>(t, "rank", "tolerances.");
    if (t.contains("divergence")) c.tol.divergence = field<double>(t, "divergence", "tolerances.");
    if (t.contains("quadrature_nodes")) {
      c.quadrature_nodes = field<std::size_t>(t, "quadrature_nodes", "tolerances.");
    }
  }
  if (doc.contains("output")) c.output = field<std::string>(doc, "output", "");
  if (doc.contains("samples_output")) c.samples_output = field<std::string>(doc, "samples_output", "");
  if (doc.contains("format")) {
    const auto f = field<std::string>(doc, "format", "");
    if (f == "csv") {
      c.format = OutputFormat::csv;
    } else if (f == "json") {
      c.format = OutputFormat::json;
    } else {
      throw ConfigError("config field 'format': expected csv or json");
    }
  }
  apply_defaults(c, doc);
  validate(c, doc);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace pebounds::cli
