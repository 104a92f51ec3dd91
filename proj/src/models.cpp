#include "pebounds/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "pebounds/error.hpp"

namespace pebounds {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_in_domain(const DiscreteModel& model, double theta) {
  const Interval d = model.domain();
  if (!std::isfinite(theta) || !d.contains(theta)) {
    throw InvalidArgument("theta = " + std::to_string(theta) + " outside the " +
                          std::string(model.family_name()) + " model domain [" +
                          std::to_string(d.lo) + ", " + std::to_string(d.hi) + "]");
  }
}

// log binom(m, k)
double log_binomial(int m, int k) {
  return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
}

// x^k with 0^0 = 1
double ipow(double x, int k) { return k == 0 ? 1.0 : std::pow(x, k); }

struct QubitProbs {
  double q1;  // P('1') = (1 - r cos theta) / 2
  double q0;
  double dq1;  // r sin theta / 2
};

QubitProbs qubit_single(const QubitBinomial& q, double theta) {
  const double half_s = std::sin(0.5 * theta);
  const double half_c = std::cos(0.5 * theta);
  const double floor = 0.5 * (1.0 - q.r);
  return {floor + q.r * half_s * half_s, floor + q.r * half_c * half_c,
          0.5 * q.r * std::sin(theta)};
}

std::vector<double> qubit_probabilities(const QubitBinomial& q, double theta) {
  const auto [q1, q0, dq1] = qubit_single(q, theta);
  std::vector<double> p(static_cast<std::size_t>(q.m) + 1);
  for (int k = 0; k <= q.m; ++k) {
    p[k] = std::exp(log_binomial(q.m, k)) * ipow(q1, k) * ipow(q0, q.m - k);
  }
  return p;
}

std::vector<double> qubit_derivatives(const QubitBinomial& q, double theta) {
  const auto [q1, q0, dq1] = qubit_single(q, theta);
  std::vector<double> d(static_cast<std::size_t>(q.m) + 1);
  for (int k = 0; k <= q.m; ++k) {
    double up = 0.0;    // k q1^{k-1} q0^{m-k}
    double down = 0.0;  // (m-k) q1^k q0^{m-k-1}
    if (k > 0) up = k * ipow(q1, k - 1) * ipow(q0, q.m - k);
    if (k < q.m) down = (q.m - k) * ipow(q1, k) * ipow(q0, q.m - k - 1);
    d[k] = std::exp(log_binomial(q.m, k)) * (up - down) * dq1;
  }
  return d;
}

// Poisson(lambda) pmf on {0, ..., max_count}; exact at lambda = 0.
std::vector<double> poisson_pmf(double lambda, std::size_t max_count) {
  std::vector<double> p(max_count + 1, 0.0);
  if (lambda == 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double log_lambda = std::log(lambda);
  for (std::size_t s = 0; s <= max_count; ++s) {
    const double sd = static_cast<double>(s);
    p[s] = std::exp(sd * log_lambda - lambda - std::lgamma(sd + 1.0));
  }
  return p;
}

std::vector<double> poisson_probabilities(const PoissonCount& pc, double theta) {
  return poisson_pmf(-pc.m * std::log(theta), pc.max_count);
}

// d/dtheta Pois(s; m mu) with mu = -ln theta equals (m/theta)(p(s) - p(s-1)).
std::vector<double> poisson_derivatives(const PoissonCount& pc, double theta) {
  const std::vector<double> p = poisson_probabilities(pc, theta);
  std::vector<double> d(p.size());
  const double scale = pc.m / theta;
  for (std::size_t s = 0; s < p.size(); ++s) {
    d[s] = scale * (p[s] - (s > 0 ? p[s - 1] : 0.0));
  }
  return d;
}

}  // namespace

std::size_t DiscreteModel::outcome_count() const {
  return std::visit(
      Overloaded{
          [](const QubitBinomial& q) { return static_cast<std::size_t>(q.m) + 1; },
          [](const PoissonCount& p) { return p.max_count + 1; },
          [](const KroneckerDelta& k) { return k.grid.size(); },
      },
      family_);
}

Interval DiscreteModel::domain() const {
  return std::visit(Overloaded{
                        [](const QubitBinomial&) { return Interval{0.0, std::numbers::pi}; },
                        [](const PoissonCount& p) { return Interval{p.theta_min, 1.0}; },
                        [](const KroneckerDelta& k) {
                          return Interval{k.grid.front(), k.grid.back()};
                        },
                    },
                    family_);
}

std::string_view DiscreteModel::family_name() const {
  return std::visit(Overloaded{
                        [](const QubitBinomial&) { return std::string_view("qubit"); },
                        [](const PoissonCount&) { return std::string_view("poisson"); },
                        [](const KroneckerDelta&) { return std::string_view("kronecker"); },
                    },
                    family_);
}

std::vector<double> DiscreteModel::probabilities(double theta) const {
  require_in_domain(*this, theta);
  return std::visit(
      Overloaded{
          [&](const QubitBinomial& q) { return qubit_probabilities(q, theta); },
          [&](const PoissonCount& p) { return poisson_probabilities(p, theta); },
          [&](const KroneckerDelta& k) {
            std::vector<double> p(k.grid.size(), 0.0);
            p[kronecker_index(k, theta)] = 1.0;
            return p;
          },
      },
      family_);
}

std::vector<double> DiscreteModel::derivatives(double theta) const {
  require_in_domain(*this, theta);
  return std::visit(
      Overloaded{
          [&](const QubitBinomial& q) { return qubit_derivatives(q, theta); },
          [&](const PoissonCount& p) { return poisson_derivatives(p, theta); },
          [&](const KroneckerDelta& k) {
            // piecewise constant in theta
            kronecker_index(k, theta);
            return std::vector<double>(k.grid.size(), 0.0);
          },
      },
      family_);
}

double DiscreteModel::prob(std::size_t x, double theta) const {
  if (x >= outcome_count()) throw InvalidArgument("outcome index out of range");
  return probabilities(theta)[x];
}

bool DiscreteModel::same_outcome_space(const DiscreteModel& other) const {
  return family_.index() == other.family_.index() &&
         outcome_count() == other.outcome_count();
}

DiscreteModel qubit_binomial(int m, double r) {
  if (m < 1) throw InvalidArgument("qubit_binomial: m must be >= 1");
  if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("qubit_binomial: r must lie in (0, 1]");
  return DiscreteModel(QubitBinomial{m, r});
}

DiscreteModel poisson_model(double theta, int m) {
  if (m < 1) throw InvalidArgument("poisson_model: m must be >= 1");
  if (!(theta > 0.0 && theta < 1.0)) {
    throw InvalidArgument("poisson_model: theta must lie in (0, 1)");
  }
  const double lambda_max = -m * std::log(theta);
  const auto max_count =
      static_cast<std::size_t>(std::ceil(lambda_max + 12.0 * std::sqrt(lambda_max) + 30.0));
  return DiscreteModel(PoissonCount{m, theta, max_count});
}

DiscreteModel kronecker_model(std::vector<double> grid) {
  if (grid.empty()) throw InvalidArgument("kronecker_model: grid must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InvalidArgument("kronecker_model: grid must be strictly increasing");
    }
  }
  return DiscreteModel(KroneckerDelta{std::move(grid)});
}

std::size_t kronecker_index(const KroneckerDelta& model, double theta) {
  const auto& g = model.grid;
  const auto it = std::min_element(g.begin(), g.end(), [theta](double a, double b) {
    return std::abs(a - theta) < std::abs(b - theta);
  });
  if (std::abs(*it - theta) > 1e-12 * std::max(1.0, std::abs(theta))) {
    throw InvalidArgument("kronecker model: theta = " + std::to_string(theta) +
                          " is not a grid point");
  }
  return static_cast<std::size_t>(it - g.begin());
}

nlohmann::json to_json(const DiscreteModel& model) {
  nlohmann::json j;
  j["family"] = std::string(model.family_name());
  j["truncation"] = model.outcome_count() - 1;
  std::visit(Overloaded{
                 [&](const QubitBinomial& q) {
                   j["m"] = q.m;
                   j["r"] = q.r;
                 },
                 [&](const PoissonCount& p) {
                   j["m"] = p.m;
                   j["theta_min"] = p.theta_min;
                 },
                 [&](const KroneckerDelta& k) { j["grid"] = k.grid; },
             },
             model.family());
  return j;
}

DiscreteModel model_from_json(const nlohmann::json& d) {
  if (!d.is_object()) throw InvalidArgument("model: expected a JSON object");
  if (!d.contains("family") || !d["family"].is_string()) {
    throw InvalidArgument("model: missing string field 'family'");
  }
  const std::string family = d["family"].get<std::string>();
  std::set<std::string> allowed{"family", "truncation"};
  if (family == "qubit") {
    allowed.insert({"m", "r"});
  } else if (family == "poisson") {
    allowed.insert({"m", "theta_min"});
  } else if (family == "kronecker") {
    allowed.insert("grid");
  } else {
    throw InvalidArgument("model: unknown family '" + family + "'");
  }
  for (const auto& [key, value] : d.items()) {
    if (!allowed.count(key)) {
      throw InvalidArgument("model: unknown field '" + key + "' for family '" + family + "'");
    }
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!d.contains(key)) {
      throw InvalidArgument("model: family '" + family + "' requires field '" + key + "'");
    }
    return d[key];
  };
  try {
    DiscreteModel model = [&] {
      if (family == "qubit") return qubit_binomial(need("m").get<int>(), d.value("r", 1.0));
      if (family == "poisson") {
        return poisson_model(need("theta_min").get<double>(), need("m").get<int>());
      }
      return kronecker_model(need("grid").get<std::vector<double>>());
    }();
    if (d.contains("truncation") &&
        d["truncation"].get<std::size_t>() != model.outcome_count() - 1) {
      throw InvalidArgument("model: 'truncation' does not match the derived support size");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("model: ") + e.what());
  }
}

}  // namespace pebounds
