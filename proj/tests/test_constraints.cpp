#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pebounds/constraints.hpp"
#include "pebounds/error.hpp"
#include "pebounds/reference.hpp"

using namespace pebounds;

namespace {

constexpr double pi = std::numbers::pi;

// Two-point Barankin bound from the 2x2 inverse, without the engine.
double two_point_oracle(const DiscreteModel& model, double theta, double theta_prime) {
  const auto p = model.probabilities(theta);
  const auto q = model.probabilities(theta_prime);
  double c11 = 0, c12 = 0, c22 = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0) continue;
    c11 += p[x];
    c12 += q[x];
    c22 += q[x] * q[x] / p[x];
  }
  const double d = theta_prime - theta;
  return d * d * c11 / (c11 * c22 - c12 * c12);
}

}  // namespace

TEST_CASE("test point grids must be strictly increasing") {
  CHECK_THROWS_AS(TestPointGrid({0.1, 0.1}, false), InvalidArgument);
  CHECK_THROWS_AS(TestPointGrid({0.3, 0.1}, false), InvalidArgument);
  CHECK_THROWS_AS(TestPointGrid({}, false), InvalidArgument);
  const TestPointGrid g = TestPointGrid::equispaced(0.5, 0.25, 3);
  CHECK(g.points() == std::vector<double>{0.5, 0.75, 1.0});
  CHECK(g.includes_truth());
}

TEST_CASE("barankin biases are offsets from the truth") {
  const DiscreteModel model = qubit_binomial(2);
  const ConstraintSet set = barankin_constraints(model, TestPointGrid({0.5, 1.0, 2.0}, false), 1.0);
  CHECK(set.kind == ConstraintKind::barankin);
  CHECK(set.biases()[0] == doctest::Approx(-0.5));
  CHECK(set.biases()[1] == 0.0);
  CHECK(set.biases()[2] == doctest::Approx(1.0));
  CHECK(set.constraints[1].test_function == model.probabilities(1.0));
}

TEST_CASE("crb constraint reproduces the qubit closed form") {
  for (double r : {1.0, 0.7}) {
    for (int m : {1, 3, 8}) {
      const DiscreteModel model = qubit_binomial(m, r);
      for (double theta : {0.4, 1.3, 2.2}) {
        const BoundResult b = evaluate_constraints(model, crb_constraint(model, theta), theta);
        REQUIRE(b.is_finite());
        CHECK(*b.value == doctest::Approx(qubit_crb(theta, m, r)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("single-point ecrb equals the crb") {
  const DiscreteModel model = poisson_model(0.1, 3);
  const double theta = 0.35;
  const BoundResult e = evaluate_constraints(model, ecrb_constraints(model, TestPointGrid({theta}, true)), theta);
  CHECK(*e.value == doctest::Approx(poisson_crb(theta, 3)).epsilon(1e-10));
}

TEST_CASE("two-point bound agrees with the 2x2 oracle and the engine") {
  const DiscreteModel model = qubit_binomial(3, 0.9);
  for (double tp : {0.2, 0.9, 1.7, 2.8}) {
    const double theta = 1.2;
    const auto v = two_point_bound(model, theta, tp);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(two_point_oracle(model, theta, tp)).epsilon(1e-10));
    const std::vector<double> pts = tp < theta ? std::vector<double>{tp, theta} : std::vector<double>{theta, tp};
    const BoundResult e = evaluate_constraints(model, barankin_constraints(model, TestPointGrid(pts, true), theta), theta);
    CHECK(*v == doctest::Approx(*e.value).epsilon(1e-9));
  }
}

TEST_CASE("hcr on the poisson model attains the closed form") {
  for (double theta : {0.1, 0.4}) {
    for (int m : {1, 2, 5}) {
      const DiscreteModel model = poisson_model(theta, m);
      const HcrResult h = hcr_bound(model, theta, {theta, 1.0});
      CHECK(h.value == doctest::Approx(poisson_barankin(theta, m)).epsilon(1e-8));
      CHECK(std::abs(h.argmax - std::pow(theta, (m - 1.0) / m)) < 1e-4);
    }
  }
}

TEST_CASE("hcr is at least the crb") {
  const DiscreteModel model = qubit_binomial(4);
  const double theta = 1.0;
  const HcrResult h = hcr_bound(model, theta, {0.0, pi});
  CHECK(h.value >= qubit_crb(theta, 4) * (1 - 1e-12));
}

TEST_CASE("adding test points never lowers the bound") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, pi - 0.05);
  const DiscreteModel model = qubit_binomial(6, 0.95);
  const double theta = 1.1;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> pts{theta, u(rng), u(rng), u(rng)};
    std::sort(pts.begin(), pts.end());
    std::vector<double> fewer = pts;
    fewer.erase(std::find(fewer.begin(), fewer.end(), pts[0] == theta ? pts[3] : pts[0]));
    const auto full = evaluate_constraints(model, barankin_constraints(model, TestPointGrid(pts, true), theta), theta);
    const auto part = evaluate_constraints(model, barankin_constraints(model, TestPointGrid(fewer, true), theta), theta);
    REQUIRE(full.is_finite());
    REQUIRE(part.is_finite());
    CHECK(*full.value >= *part.value * (1 - 1e-9));
  }
}

TEST_CASE("iid barankin matrix is the single-shot matrix to the m-th power") {
  const std::vector<double> pts{0.3, 0.8, 1.5, 2.4};
  const double theta = 0.8;
  const DiscreteModel one = qubit_binomial(1);
  const RowMatrix c1 = constraint_matrix(one, barankin_constraints(one, TestPointGrid(pts, true), theta), theta).matrix;
  for (int m = 2; m <= 6; ++m) {
    const DiscreteModel model = qubit_binomial(m);
    const RowMatrix cm = constraint_matrix(model, barankin_constraints(model, TestPointGrid(pts, true), theta), theta).matrix;
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) CHECK(cm(k, l) == doctest::Approx(std::pow(c1(k, l), m)).epsilon(1e-10));
  }
}

TEST_CASE("more test points than outcomes diverge") {
  for (int m = 1; m <= 4; ++m) {
    const DiscreteModel model = qubit_binomial(m);
    const int n = m + 2;
    const TestPointGrid g = TestPointGrid::equispaced(0.3, 2.5 / n, n);
    const BoundResult b = evaluate_constraints(model, barankin_constraints(model, g, 0.3), 0.3);
    CHECK(b.status == BoundStatus::divergent);
    CHECK(b.rank <= m + 1);
    CHECK(b.kernel_projection_norm > 0);
  }
}

TEST_CASE("ecrb rank never exceeds D - 1") {
  for (int m = 1; m <= 6; ++m) {
    const DiscreteModel model = qubit_binomial(m);
    for (int n = 1; n <= 6; ++n) {
      const TestPointGrid g = TestPointGrid::equispaced(0.5, 0.37, n);
      const BoundResult b = evaluate_constraints(model, ecrb_constraints(model, g), 0.5);
      CHECK(b.rank <= std::min(n, m));
      if (b.is_finite()) CHECK(*b.value >= qubit_crb(0.5, m) * (1 - 1e-10));
    }
  }
}

TEST_CASE("grid sweep matches brute force on a coarse grid") {
  const DiscreteModel model = qubit_binomial(3);
  const double theta = 1.0;
  SweepOptions opt;
  opt.search = {0.2, 2.9};
  opt.grid_points = 10;
  const SweepResult sweep = barankin_sweep(model, theta, 3, SweepStrategy::grid_scan, opt);
  REQUIRE(sweep.value.has_value());

  std::vector<double> cand;
  for (int i = 0; i < opt.grid_points; ++i) cand.push_back(opt.search.lo + i * opt.search.width() / (opt.grid_points - 1));
  double best = -1;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = i + 1; j < cand.size(); ++j) {
      std::vector<double> pts{theta, cand[i], cand[j]};
      std::sort(pts.begin(), pts.end());
      if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) continue;
      const auto b = evaluate_constraints(model, barankin_constraints(model, TestPointGrid(pts, true), theta), theta);
      if (b.is_finite() && b.rank == 3) best = std::max(best, *b.value);
    }
  }
  CHECK(*sweep.value == doctest::Approx(best).epsilon(1e-12));
  CHECK(sweep.placement.front() == theta);

  const SweepResult refined = barankin_sweep(model, theta, 3, SweepStrategy::coordinate_refine, opt);
  REQUIRE(refined.value.has_value());
  CHECK(*refined.value >= *sweep.value * (1 - 1e-12));
}

TEST_CASE("sweep with too many points reports every placement divergent") {
  const DiscreteModel model = qubit_binomial(1);
  SweepOptions opt;
  opt.search = {0.2, 2.9};
  opt.grid_points = 6;
  const SweepResult s = barankin_sweep(model, 1.0, 3, SweepStrategy::grid_scan, opt);
  CHECK(s.all_divergent());
  CHECK(s.evaluated > 0);
  CHECK(s.divergent + s.ill_conditioned == s.evaluated);
}

TEST_CASE("minimum grid spacing") {
  CHECK(min_grid_spacing(0.0, 3.0, 4) == doctest::Approx(1.0));
  CHECK(min_grid_spacing_iid(0.0, pi, 5) == doctest::Approx(pi / 5));
  CHECK_THROWS_AS(min_grid_spacing(0.0, 1.0, 1), InvalidArgument);
}
