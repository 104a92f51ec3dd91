#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pebounds/models.hpp"

namespace pebounds {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Numerical thresholds shared by the bound machinery.
struct Tolerances {
  /// x belongs to the support X_+ iff p(x|theta) > support.
  double support = 0.0;
  /// Eigenvalues below rank * (largest eigenvalue) span the kernel.
  double rank = 1e-10;
  /// Divergent iff |kernel projection of lambda| > divergence * |lambda|.
  double divergence = 1e-8;
};

enum class ConstraintKind { barankin, ecrb, crb, custom };

std::string_view to_string(ConstraintKind kind);

/// One linear condition sum_x g(x) (est(x) - <est>) = bias.
struct Constraint {
  std::vector<double> test_function;  // g over the model's outcomes
  double bias = 0.0;
  std::string label;
};

struct ConstraintSet {
  std::vector<Constraint> constraints;
  ConstraintKind kind = ConstraintKind::custom;
  double anchor = 0.0;  // true parameter the bound is evaluated at

  std::size_t size() const { return constraints.size(); }
  Vector biases() const;
};

struct ConstraintMatrix {
  RowMatrix matrix;
  std::size_t support_size = 0;
  /// Some g_k is nonzero on an outcome outside X_+.
  bool support_warning = false;
};

/// C_kl = sum_{x in X_+} g_k(x) g_l(x) / p(x|theta), exactly symmetric.
/// Throws NumericalError("degenerate model") if X_+ is empty and
/// InvalidArgument if a test function does not match the outcome space.
ConstraintMatrix constraint_matrix(const DiscreteModel& model, const ConstraintSet& set,
                                   double theta, const Tolerances& tol = {});

enum class BoundStatus { finite, divergent };

std::string_view to_string(BoundStatus status);

/// Outcome of sup_a (a.lambda)^2 / (a.C.a).
///
/// The spectral diagnostics (rank, kernel_projection_norm, bias_norm,
/// smallest_kept_singular_value, condition_number) refer to the
/// unit-diagonal rescaled problem D^-1 C D^-1, D = diag(sqrt(C_kk)), which
/// leaves the supremum unchanged and makes the thresholds independent of
/// per-constraint scale.
struct BoundResult {
  BoundStatus status = BoundStatus::finite;
  std::optional<double> value;  // present iff finite
  int rank = 0;
  double kernel_projection_norm = 0.0;
  double bias_norm = 0.0;
  double smallest_kept_singular_value = 0.0;
  double condition_number = 0.0;
  bool support_warning = false;

  bool is_finite() const { return status == BoundStatus::finite; }
};

/// lambda^T C^+ lambda on the kept eigenspace, or divergent when lambda has
/// a component in ker(C). Throws InvalidArgument for non-square, asymmetric
/// or mismatched inputs and NumericalError("not PSD") for eigenvalues below
/// -rank * max eigenvalue.
BoundResult evaluate_bound(const RowMatrix& c, const Vector& lambda, const Tolerances& tol = {});

/// constraint_matrix + evaluate_bound, carrying the support warning over.
BoundResult evaluate_constraints(const DiscreteModel& model, const ConstraintSet& set,
                                 double theta, const Tolerances& tol = {});

/// sum_x p(x|theta) (est(x) - <est>_theta)^2
double estimator_variance(const DiscreteModel& model, std::span<const double> estimator,
                          double theta);

struct EstimatorBound {
  Vector biases;
  BoundResult bound;
  double variance = 0.0;
};

/// Barankin test functions p(x|theta_k) with the biases the given estimator
/// realizes, so the estimator itself is feasible and bound <= variance.
EstimatorBound bound_from_estimator(const DiscreteModel& model, std::span<const double> estimator,
                                    std::span<const double> test_points, double theta,
                                    const Tolerances& tol = {});

}  // namespace pebounds
