#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pebounds/engine.hpp"
#include "pebounds/models.hpp"

namespace pebounds::cli {

/// Malformed or inconsistent run configuration. The message names the
/// offending line/column (syntax) or field path (schema).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { fig1, fig2, fig3, bound, quantum_check };
enum class OutputFormat { csv, json };

std::string_view to_string(Command command);

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::barankin;
  std::vector<double> test_points;  // explicit points, or
  std::optional<double> spacing;    // theta + k * spacing, k < n
  std::optional<int> n;
};

struct RunConfig {
  Command command = Command::fig1;
  std::optional<DiscreteModel> model;
  std::optional<ConstraintSpec> constraints;
  double theta = 0.0;
  std::vector<int> m_values;
  std::vector<int> n_values;
  std::vector<double> thetas;
  double r = 1.0;
  double spacing = 0.0;
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  std::size_t truncation = 60;
  std::vector<double> epsilons;
  Tolerances tol{};
  std::size_t quadrature_nodes = 20001;
  std::optional<std::string> output;
  std::optional<std::string> samples_output;
  OutputFormat format = OutputFormat::csv;
};

/// Parses one JSON object. Fields absent from the document take the
/// per-command defaults; unknown fields are rejected.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace pebounds::cli
