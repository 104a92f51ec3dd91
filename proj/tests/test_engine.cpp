#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>

#include "pebounds/constraints.hpp"
#include "pebounds/engine.hpp"
#include "pebounds/error.hpp"

using namespace pebounds;

namespace {

RowMatrix random_spd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  RowMatrix a(n, n + 2);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
  RowMatrix c = a * a.transpose();
  return (c + c.transpose()) / 2;
}

}  // namespace

TEST_CASE("2x2 bound matches the hand inverse") {
  RowMatrix c(2, 2);
  c << 2.0, 0.5, 0.5, 1.0;
  Vector lambda(2);
  lambda << 1.0, -3.0;
  // inverse = [[1, -0.5], [-0.5, 2]] / 1.75
  const double expected = (1.0 * 1 - 2 * 0.5 * 1 * -3.0 + 2.0 * 9) / 1.75;
  const BoundResult r = evaluate_bound(c, lambda);
  REQUIRE(r.is_finite());
  CHECK(*r.value == doctest::Approx(expected).epsilon(1e-14));
  CHECK(r.rank == 2);
  CHECK(r.kernel_projection_norm == 0.0);
}

TEST_CASE("full-rank bound equals an LDLT solve") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6;
    const RowMatrix c = random_spd(rng, n);
    Vector lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = normal(rng);
    const double oracle = lambda.dot(c.ldlt().solve(lambda));
    const BoundResult r = evaluate_bound(c, lambda);
    REQUIRE(r.is_finite());
    CHECK(*r.value == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("poisson two-point matrix") {
  const DiscreteModel model = poisson_model(0.1, 1);
  const ConstraintSet set = barankin_constraints(model, TestPointGrid({0.1, 1.0}, true), 0.1);
  const ConstraintMatrix c = constraint_matrix(model, set, 0.1);
  CHECK(c.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.matrix(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.matrix(1, 1) == doctest::Approx(10.0).epsilon(1e-12));
  const BoundResult r = evaluate_constraints(model, set, 0.1);
  REQUIRE(r.is_finite());
  CHECK(*r.value == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("bias in the kernel diverges") {
  RowMatrix c(2, 2);
  c << 1.0, 1.0, 1.0, 1.0;
  Vector lambda(2);
  lambda << 1.0, -1.0;
  const BoundResult r = evaluate_bound(c, lambda);
  CHECK(r.status == BoundStatus::divergent);
  CHECK_FALSE(r.value.has_value());
  CHECK(r.rank == 1);
  CHECK(r.kernel_projection_norm == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("bias in the range of a singular matrix stays finite") {
  RowMatrix c(2, 2);
  c << 1.0, 1.0, 1.0, 1.0;
  Vector lambda(2);
  lambda << 2.0, 2.0;
  const BoundResult r = evaluate_bound(c, lambda);
  REQUIRE(r.is_finite());
  // sup (a.lambda)^2 / (a.C.a) = (2(a1+a2))^2 / (a1+a2)^2
  CHECK(*r.value == doctest::Approx(4.0));
}

TEST_CASE("zero test function with zero bias is harmless") {
  RowMatrix c = RowMatrix::Zero(2, 2);
  c(0, 0) = 4.0;
  Vector lambda(2);
  lambda << 1.0, 0.0;
  const BoundResult r = evaluate_bound(c, lambda);
  REQUIRE(r.is_finite());
  CHECK(*r.value == doctest::Approx(0.25));
  lambda[1] = 0.5;
  CHECK(evaluate_bound(c, lambda).status == BoundStatus::divergent);
}

TEST_CASE("per-constraint rescaling leaves the bound unchanged") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const RowMatrix c = random_spd(rng, n);
    Vector lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = normal(rng);
    Vector s(n);
    for (int i = 0; i < n; ++i) s[i] = std::pow(10.0, scale(rng)) * (i % 2 ? -1 : 1);
    const RowMatrix scaled = s.asDiagonal() * c * s.asDiagonal();
    const Vector scaled_lambda = s.cwiseProduct(lambda);
    CHECK(*evaluate_bound(scaled, scaled_lambda).value ==
          doctest::Approx(*evaluate_bound(c, lambda).value).epsilon(1e-9));
  }
}

TEST_CASE("invalid inputs") {
  RowMatrix c(2, 2);
  c << 1.0, 0.2, 0.3, 1.0;
  Vector lambda = Vector::Ones(2);
  CHECK_THROWS_AS(evaluate_bound(c, lambda), InvalidArgument);
  c(1, 0) = 0.2;
  CHECK_THROWS_AS(evaluate_bound(c, Vector::Ones(3)), InvalidArgument);
  CHECK_THROWS_AS(evaluate_bound(RowMatrix::Ones(2, 3), lambda), InvalidArgument);
  RowMatrix indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(evaluate_bound(indefinite, lambda), NumericalError);
  c(0, 0) = std::nan("");
  CHECK_THROWS_AS(evaluate_bound(c, lambda), InvalidArgument);
}

TEST_CASE("constraint matrix is symmetric and flags support violations") {
  const DiscreteModel model = poisson_model(0.1, 2);
  const ConstraintSet set = barankin_constraints(model, TestPointGrid({0.2, 0.5, 0.9}, false), 0.5);
  const ConstraintMatrix c = constraint_matrix(model, set, 0.5);
  CHECK(c.matrix == c.matrix.transpose());
  CHECK_FALSE(c.support_warning);

  const DiscreteModel k = kronecker_model({0.0, 1.0, 2.0});
  const ConstraintSet ks = barankin_constraints(k, TestPointGrid({0.0, 1.0}, true), 0.0);
  const ConstraintMatrix kc = constraint_matrix(k, ks, 0.0);
  CHECK(kc.support_size == 1);
  CHECK(kc.support_warning);
  const BoundResult r = evaluate_constraints(k, ks, 0.0);
  CHECK(r.status == BoundStatus::divergent);
  CHECK(r.support_warning);
}

TEST_CASE("mismatched test function length is rejected") {
  const DiscreteModel model = qubit_binomial(2);
  ConstraintSet set;
  set.constraints.push_back({{1.0, 2.0}, 0.0, "short"});
  CHECK_THROWS_AS(constraint_matrix(model, set, 1.0), InvalidArgument);
}

TEST_CASE("estimator bound never exceeds the estimator variance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const DiscreteModel model = qubit_binomial(4);
  std::vector<double> est(model.outcome_count());
  for (int trial = 0; trial < 40; ++trial) {
    for (double& e : est) e = u(rng);
    const double theta = 1.0;
    const std::vector<double> points{0.4, 1.0, 1.9};
    const EstimatorBound eb = bound_from_estimator(model, est, points, theta);
    CHECK(eb.variance == doctest::Approx(estimator_variance(model, est, theta)));
    REQUIRE(eb.bound.is_finite());
    CHECK(*eb.bound.value <= eb.variance * (1 + 1e-10));
  }
}

TEST_CASE("estimator variance of the identity on a Kronecker model is zero") {
  const DiscreteModel k = kronecker_model({0.0, 1.0, 2.0});
  const std::vector<double> est{0.0, 1.0, 2.0};
  CHECK(estimator_variance(k, est, 1.0) == 0.0);
}
