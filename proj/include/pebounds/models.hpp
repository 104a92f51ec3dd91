#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace pebounds {

/// Closed parameter interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

/// m projective measurements of a qubit with Bloch-vector length r, reduced
/// to the number k of '1' outcomes.
struct QubitBinomial {
  int m = 1;
  double r = 1.0;
};

/// Total count of m iid Poisson draws parametrized by the zero-count
/// probability theta, truncated at max_count.
struct PoissonCount {
  int m = 1;
  double theta_min = 0.1;
  std::size_t max_count = 0;
};

/// p(x|theta) = delta_{x, k(theta)} on a strictly increasing grid.
struct KroneckerDelta {
  std::vector<double> grid;
};

/// A parametric distribution over a finite ordered outcome set with analytic
/// theta-derivative. Immutable after construction.
class DiscreteModel {
 public:
  using Family = std::variant<QubitBinomial, PoissonCount, KroneckerDelta>;

  std::size_t outcome_count() const;
  Interval domain() const;
  std::string_view family_name() const;
  const Family& family() const { return family_; }

  /// p(x|theta) for every outcome x. Throws InvalidArgument outside domain().
  std::vector<double> probabilities(double theta) const;
  /// d/dtheta p(x|theta) for every outcome x.
  std::vector<double> derivatives(double theta) const;
  double prob(std::size_t x, double theta) const;

  bool same_outcome_space(const DiscreteModel& other) const;

 private:
  explicit DiscreteModel(Family family) : family_(std::move(family)) {}

  friend DiscreteModel qubit_binomial(int m, double r);
  friend DiscreteModel poisson_model(double theta, int m);
  friend DiscreteModel kronecker_model(std::vector<double> grid);

  Family family_;
};

/// Binomial count of '1' outcomes over m qubit measurements,
/// q1 = (1 - r cos theta) / 2. Domain [0, pi].
DiscreteModel qubit_binomial(int m, double r = 1.0);

/// Sufficient total count of m Poisson draws with mean -ln(theta) each.
/// `theta` is the smallest parameter value the model will be evaluated at;
/// the support is truncated so the discarded tail mass stays below 1e-12 on
/// [theta, 1].
DiscreteModel poisson_model(double theta, int m);

/// Deterministic outcome model on `grid` (D = grid.size()).
DiscreteModel kronecker_model(std::vector<double> grid);

/// Index of the grid point equal to theta; throws if theta is not on the grid.
std::size_t kronecker_index(const KroneckerDelta& model, double theta);

/// {family, parameters, truncation} description used by the CLI.
nlohmann::json to_json(const DiscreteModel& model);
DiscreteModel model_from_json(const nlohmann::json& description);

}  // namespace pebounds
