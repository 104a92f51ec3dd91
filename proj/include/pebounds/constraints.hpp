#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pebounds/engine.hpp"
#include "pebounds/models.hpp"

namespace pebounds {

/// Strictly increasing test points theta_1 < ... < theta_n.
class TestPointGrid {
 public:
  TestPointGrid(std::vector<double> points, bool includes_truth);

  /// anchor + k * spacing for k = 0..n-1 (the truth is the first point).
  static TestPointGrid equispaced(double anchor, double spacing, int n);

  const std::vector<double>& points() const { return points_; }
  bool includes_truth() const { return includes_truth_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<double> points_;
  bool includes_truth_;
};

/// g_k(x) = p(x|theta_k), lambda_k = theta_k - theta.
ConstraintSet barankin_constraints(const DiscreteModel& model, const TestPointGrid& grid,
                                   double theta);

/// g_k(x) = dp(x|theta)/dtheta at theta_k, lambda_k = 1. Anchored at the
/// first grid point unless an anchor is given.
ConstraintSet ecrb_constraints(const DiscreteModel& model, const TestPointGrid& grid);
ConstraintSet ecrb_constraints(const DiscreteModel& model, const TestPointGrid& grid,
                               double anchor);

/// Single unit-slope condition at theta; its bound is 1 / F(theta).
ConstraintSet crb_constraint(const DiscreteModel& model, double theta);

/// Barankin bound for the pair {theta, theta_prime}:
/// (theta' - theta)^2 / sum_{X_+} (p' - kappa p)^2 / p with
/// kappa = sum_{X_+} p' / sum_{X_+} p. Returns nullopt when the
/// denominator vanishes (p' proportional to p on the support).
std::optional<double> two_point_bound(const DiscreteModel& model, double theta,
                                      double theta_prime, const Tolerances& tol = {});

struct HcrResult {
  double value = 0.0;
  double argmax = 0.0;  // equals theta when the CRB limit is the supremum
};

/// Hammersley-Chapman-Robbins bound: the two-point bound maximized over
/// theta' in `search` (a 64-point scan refined by golden section to
/// |d theta'| < 1e-10). Points within 1e-6 * width of theta are excluded;
/// the theta' -> theta limit (the CRB) is included as a candidate.
HcrResult hcr_bound(const DiscreteModel& model, double theta, Interval search,
                    const Tolerances& tol = {});

enum class SweepStrategy { grid_scan, coordinate_refine };

struct SweepOptions {
  Interval search{};
  int grid_points = 24;    // candidate locations per free test point
  int refine_passes = 8;   // coordinate_refine only
  int refine_scan = 32;    // coarse points per 1-D refinement
  Tolerances tol{};
};

struct SweepResult {
  std::optional<double> value;
  std::vector<double> placement;  // best test points, truth first
  std::size_t evaluated = 0;
  std::size_t divergent = 0;
  std::size_t ill_conditioned = 0;  // finite but rank-deficient, skipped

  bool all_divergent() const { return !value.has_value(); }
};

/// Best Barankin bound over placements of n test points (theta plus n - 1
/// free points in options.search). Deterministic; ties go to the
/// lexicographically smaller placement.
SweepResult barankin_sweep(const DiscreteModel& model, double theta, int n,
                           SweepStrategy strategy, const SweepOptions& options);

/// Smallest equidistant spacing on [a, b] keeping n = D test points: (b-a)/(D-1).
double min_grid_spacing(double a, double b, int outcomes);
/// Same for m iid two-outcome measurements (D = m + 1): (b-a)/m.
double min_grid_spacing_iid(double a, double b, int m);

}  // namespace pebounds
