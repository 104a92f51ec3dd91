#include "pebounds/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "pebounds/bayes.hpp"
#include "pebounds/constraints.hpp"
#include "pebounds/quantum.hpp"
#include "pebounds/reference.hpp"

namespace pebounds::cli {
namespace {

// Runs body(i) for i < count on a few threads; the first exception (by index)
// is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  const unsigned threads =
      std::clamp<unsigned>(std::thread::hardware_concurrency(), 1u, static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  auto work = [&](std::size_t start) {
    for (std::size_t i = start; i < count; i += threads) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Cell optional_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{std::monostate{}};
}

Table qubit_figure(const RunConfig& config, ConstraintKind kind) {
  const std::vector<int> ms = sorted(config.m_values);
  const std::vector<int> ns = sorted(config.n_values);
  struct Cellout {
    int m;
    int n;
    BoundResult bound;
    double crb;
  };
  std::vector<Cellout> cells;
  for (int m : ms) {
    for (int n : ns) cells.push_back({m, n, {}, 0.0});
  }
  parallel_for(cells.size(), [&](std::size_t i) {
    Cellout& c = cells[i];
    const DiscreteModel model = qubit_binomial(c.m, config.r);
    const TestPointGrid grid = TestPointGrid::equispaced(config.theta, config.spacing, c.n);
    const ConstraintSet set = kind == ConstraintKind::barankin
                                  ? barankin_constraints(model, grid, config.theta)
                                  : ecrb_constraints(model, grid, config.theta);
    c.bound = evaluate_constraints(model, set, config.theta, config.tol);
    c.crb = qubit_crb(config.theta, c.m, config.r);
  });

  Table t;
  t.columns = {"m", "n", "status", "bound", "crb", "rank", "kernel_projection_norm"};
  for (const auto& c : cells) {
    t.add_row({std::int64_t{c.m}, std::int64_t{c.n}, std::string(to_string(c.bound.status)),
               optional_cell(c.bound.value), c.crb, std::int64_t{c.bound.rank},
               c.bound.kernel_projection_norm});
  }
  return t;
}

}  // namespace

Table run_fig1(const RunConfig& config) { return qubit_figure(config, ConstraintKind::barankin); }

Table run_fig2(const RunConfig& config) { return qubit_figure(config, ConstraintKind::ecrb); }

Fig3Output run_fig3(const RunConfig& config) {
  const std::vector<int> ms = sorted(config.m_values);
  std::vector<std::pair<double, int>> cells;
  for (double theta : config.thetas) {
    for (int m : ms) cells.emplace_back(theta, m);
  }
  std::vector<Fig3Result> results(cells.size());
  Fig3Options options;
  options.n_samples = config.samples;
  options.seed = config.seed;
  options.quadrature_nodes = config.quadrature_nodes;
  options.threads = 1;  // cells are already spread over threads
  parallel_for(cells.size(), [&](std::size_t i) {
    results[i] = fig3_protocol(cells[i].first, cells[i].second, options);
  });

  Fig3Output out;
  out.table.columns = {"theta", "m", "barankin_ratio", "mle_ratio", "bayes_ratio", "bayes_stderr"};
  out.samples.columns = {"theta", "m", "sample", "total_count", "posterior_mean", "posterior_variance"};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [theta, m] = cells[i];
    const double crb = poisson_crb(theta, m);
    out.table.add_row({theta, std::int64_t{m}, poisson_barankin(theta, m) / crb,
                       poisson_mle_variance(theta, m) / crb, results[i].mean_ratio,
                       results[i].standard_error});
    for (const auto& s : results[i].samples) {
      out.samples.add_row({theta, std::int64_t{m}, static_cast<std::int64_t>(s.index),
                           static_cast<std::int64_t>(s.total_count), s.posterior_mean,
                           s.posterior_variance});
    }
  }
  return out;
}

Table run_bound(const RunConfig& config) {
  const DiscreteModel& model = *config.model;
  const ConstraintSpec& spec = *config.constraints;
  const double theta = config.theta;
  ConstraintSet set;
  if (spec.kind == ConstraintKind::crb) {
    set = crb_constraint(model, theta);
  } else {
    const TestPointGrid grid = spec.test_points.empty()
                                   ? TestPointGrid::equispaced(theta, *spec.spacing, *spec.n)
                                   : TestPointGrid(spec.test_points, spec.test_points.front() == theta);
    set = spec.kind == ConstraintKind::barankin ? barankin_constraints(model, grid, theta)
                                                : ecrb_constraints(model, grid, theta);
  }
  const BoundResult r = evaluate_constraints(model, set, theta, config.tol);

  Table t;
  t.columns = {"model",  "kind", "theta", "n", "status", "value", "rank", "kernel_projection_norm",
               "bias_norm", "smallest_kept_singular_value", "condition_number", "support_warning"};
  t.add_row({std::string(model.family_name()), std::string(to_string(set.kind)), theta,
             static_cast<std::int64_t>(set.size()), std::string(to_string(r.status)),
             optional_cell(r.value), std::int64_t{r.rank}, r.kernel_projection_norm, r.bias_norm,
             r.smallest_kept_singular_value, r.condition_number, r.support_warning});
  return t;
}

Table run_quantum_check(const RunConfig& config) {
  Table t;
  t.columns = {"theta", "qfi_pure", "qfi_closed_form", "classical_fisher", "q_regularized_limit"};
  const std::size_t truncation = config.truncation;
  for (double theta : config.thetas) {
    const double qfi = qfi_pure(coherent_state(theta, truncation));
    const DiscreteModel poisson = poisson_model(theta, 1);
    const BoundResult crb = evaluate_constraints(poisson, crb_constraint(poisson, theta), theta, config.tol);
    const double limit = regularized_qfi_limit(
        [truncation](double t) { return coherent_state(t, truncation); }, theta, config.epsilons,
        config.tol);
    t.add_row({theta, qfi, -1.0 / (theta * theta * std::log(theta)),
               crb.is_finite() ? Cell{1.0 / *crb.value} : Cell{std::monostate{}}, limit});
  }
  return t;
}

RunOutput run(const RunConfig& config) {
  switch (config.command) {
    case Command::fig1: return {run_fig1(config), std::nullopt};
    case Command::fig2: return {run_fig2(config), std::nullopt};
    case Command::fig3: {
      Fig3Output out = run_fig3(config);
      return {std::move(out.table), std::move(out.samples)};
    }
    case Command::bound: return {run_bound(config), std::nullopt};
    case Command::quantum_check: return {run_quantum_check(config), std::nullopt};
  }
  return {};
}

std::string render(const Table& table, OutputFormat format) {
  return format == OutputFormat::json ? render_json(table) : render_csv(table);
}

}  // namespace pebounds::cli
