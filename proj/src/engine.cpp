#include "pebounds/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "pebounds/error.hpp"

namespace pebounds {

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::barankin: return "barankin";
    case ConstraintKind::ecrb: return "ecrb";
    case ConstraintKind::crb: return "crb";
    case ConstraintKind::custom: return "custom";
  }
  return "custom";
}

std::string_view to_string(BoundStatus status) {
  return status == BoundStatus::finite ? "finite" : "divergent";
}

Vector ConstraintSet::biases() const {
  Vector lambda(static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t k = 0; k < constraints.size(); ++k) lambda[k] = constraints[k].bias;
  return lambda;
}

ConstraintMatrix constraint_matrix(const DiscreteModel& model, const ConstraintSet& set,
                                   double theta, const Tolerances& tol) {
  if (set.constraints.empty()) throw InvalidArgument("constraint set is empty");
  const std::size_t outcomes = model.outcome_count();
  for (const auto& c : set.constraints) {
    if (c.test_function.size() != outcomes) {
      throw InvalidArgument("test function '" + c.label + "' has " +
                            std::to_string(c.test_function.size()) + " entries, model has " +
                            std::to_string(outcomes) + " outcomes");
    }
  }

  const std::vector<double> p = model.probabilities(theta);
  const auto n = static_cast<Eigen::Index>(set.size());

  ConstraintMatrix out;
  out.matrix = RowMatrix::Zero(n, n);
  // Accumulate sum_x P(x) P(x)^T with P_k(x) = g_k(x) / sqrt(p(x)).
  Vector column(n);
  for (std::size_t x = 0; x < outcomes; ++x) {
    if (!(p[x] > tol.support)) {
      for (const auto& c : set.constraints) {
        if (std::abs(c.test_function[x]) > tol.support) out.support_warning = true;
      }
      continue;
    }
    ++out.support_size;
    const double inv_sqrt = 1.0 / std::sqrt(p[x]);
    for (Eigen::Index k = 0; k < n; ++k) column[k] = set.constraints[k].test_function[x] * inv_sqrt;
    out.matrix.noalias() += column * column.transpose();
  }
  if (out.support_size == 0) throw NumericalError("degenerate model: empty support");
  out.matrix = (0.5 * (out.matrix + out.matrix.transpose())).eval();
  return out;
}

BoundResult evaluate_bound(const RowMatrix& c, const Vector& lambda, const Tolerances& tol) {
  const Eigen::Index n = c.rows();
  if (n == 0 || c.cols() != n) throw InvalidArgument("constraint matrix must be square and nonempty");
  if (lambda.size() != n) throw InvalidArgument("bias vector dimension does not match the matrix");
  if (!c.allFinite() || !lambda.allFinite()) throw InvalidArgument("non-finite input to evaluate_bound");
  const double scale = c.cwiseAbs().maxCoeff();
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("constraint matrix is not symmetric");
  }

  // Equilibrate to unit diagonal; zero rows keep unit scale and land in the kernel.
  const double max_diag = c.diagonal().maxCoeff();
  Vector d(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double ckk = c(k, k);
    if (ckk < -tol.rank * std::max(max_diag, 0.0) || (ckk < 0.0 && max_diag <= 0.0)) {
      throw NumericalError("constraint matrix is not PSD (negative diagonal entry)");
    }
    d[k] = ckk > 0.0 ? std::sqrt(ckk) : 1.0;
  }
  const Vector inv_d = d.cwiseInverse();
  const Eigen::MatrixXd scaled = inv_d.asDiagonal() * c * inv_d.asDiagonal();
  const Vector mu = inv_d.cwiseProduct(lambda);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (scaled + scaled.transpose()));
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Vector& values = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = eig.eigenvectors();
  const double largest = values[n - 1];
  if (values[0] < -tol.rank * std::max(largest, 0.0)) {
    throw NumericalError("constraint matrix is not PSD (eigenvalue " + std::to_string(values[0]) + ")");
  }

  BoundResult r;
  r.bias_norm = mu.norm();
  const double cutoff = largest > 0.0 ? tol.rank * largest : std::numeric_limits<double>::infinity();
  double kernel_sq = 0.0;
  double value = 0.0;
  double smallest_kept = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double overlap = vectors.col(i).dot(mu);
    if (values[i] < cutoff) {
      kernel_sq += overlap * overlap;
    } else {
      ++r.rank;
      value += overlap * overlap / values[i];
      smallest_kept = std::min(smallest_kept, values[i]);
    }
  }
  r.kernel_projection_norm = std::sqrt(kernel_sq);
  r.smallest_kept_singular_value = r.rank > 0 ? smallest_kept : 0.0;
  r.condition_number = values[0] > 0.0 ? largest / values[0] : std::numeric_limits<double>::infinity();
  if (r.kernel_projection_norm > tol.divergence * r.bias_norm) {
    r.status = BoundStatus::divergent;
  } else {
    r.status = BoundStatus::finite;
    r.value = value;
  }
  return r;
}

BoundResult evaluate_constraints(const DiscreteModel& model, const ConstraintSet& set, double theta,
                                 const Tolerances& tol) {
  const ConstraintMatrix cm = constraint_matrix(model, set, theta, tol);
  BoundResult r = evaluate_bound(cm.matrix, set.biases(), tol);
  r.support_warning = cm.support_warning;
  return r;
}

namespace {

double mean_under(const std::vector<double>& p, std::span<const double> estimator) {
  double mean = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) mean += p[x] * estimator[x];
  return mean;
}

void require_estimator_size(const DiscreteModel& model, std::span<const double> estimator) {
  if (estimator.size() != model.outcome_count()) {
    throw InvalidArgument("estimator defined on " + std::to_string(estimator.size()) +
                          " outcomes, model has " + std::to_string(model.outcome_count()));
  }
}

}  // namespace

double estimator_variance(const DiscreteModel& model, std::span<const double> estimator, double theta) {
  require_estimator_size(model, estimator);
  const std::vector<double> p = model.probabilities(theta);
  const double mean = mean_under(p, estimator);
  double var = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double dev = estimator[x] - mean;
    var += p[x] * dev * dev;
  }
  return var;
}

EstimatorBound bound_from_estimator(const DiscreteModel& model, std::span<const double> estimator,
                                    std::span<const double> test_points, double theta,
                                    const Tolerances& tol) {
  require_estimator_size(model, estimator);
  if (test_points.empty()) throw InvalidArgument("bound_from_estimator: no test points");
  const double mean = mean_under(model.probabilities(theta), estimator);

  ConstraintSet set;
  set.kind = ConstraintKind::custom;
  set.anchor = theta;
  for (double tk : test_points) {
    Constraint c;
    c.test_function = model.probabilities(tk);
    for (std::size_t x = 0; x < c.test_function.size(); ++x) {
      c.bias += c.test_function[x] * (estimator[x] - mean);
    }
    c.label = "estimator-bias@" + std::to_string(tk);
    set.constraints.push_back(std::move(c));
  }

  EstimatorBound out;
  out.biases = set.biases();
  out.bound = evaluate_constraints(model, set, theta, tol);
  out.variance = estimator_variance(model, estimator, theta);
  return out;
}

}  // namespace pebounds
