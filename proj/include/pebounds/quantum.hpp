#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Core>

#include "pebounds/engine.hpp"

namespace pebounds {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// rho = sum_i p_i |i><i| with orthonormal eigenvectors in the columns of basis().
class DensityEigen {
 public:
  /// Hermitian, unit trace (1e-12), eigenvalues >= -1e-12 (clipped to 0).
  static DensityEigen from_matrix(const CMatrix& rho);

  const Eigen::VectorXd& probabilities() const { return probabilities_; }
  const CMatrix& basis() const { return basis_; }
  std::size_t dimension() const { return static_cast<std::size_t>(probabilities_.size()); }
  CMatrix matrix() const;

 private:
  DensityEigen(Eigen::VectorXd p, CMatrix v) : probabilities_(std::move(p)), basis_(std::move(v)) {}

  Eigen::VectorXd probabilities_;
  CMatrix basis_;
};

/// Omega_rho(X) = sum_ij 2/(p_i+p_j) |i><i|X|j><j|. Requires every p_i above
/// `rank_tol` (throws NumericalError "regularize first") and Hermitian X.
CMatrix omega_apply(const DensityEigen& rho, const CMatrix& x, double rank_tol = 1e-10);

/// theta -> rho(theta) with its analytic derivative.
struct StateFamily {
  std::function<CMatrix(double)> density;
  std::function<CMatrix(double)> derivative;
};

/// Q_kl = Tr{ d rho(theta_k) Omega_{rho(theta)}( d rho(theta_l) ) }.
RowMatrix q_ecrb_matrix(const StateFamily& family, std::span<const double> test_points,
                        double theta, const Tolerances& tol = {});

/// lambda^T Q^+ lambda with lambda = (1, ..., 1).
BoundResult quantum_ecrb_bound(const StateFamily& family, std::span<const double> test_points,
                               double theta, const Tolerances& tol = {});

/// rho(theta) = (I + r cos(theta) sigma_z) / 2.
StateFamily qubit_dephased_family(double r);

/// Pure state on a truncated Fock basis with its theta-derivative.
struct PureState {
  CVector amplitudes;
  CVector damplitudes;
};

/// (1 - eps) |psi><psi| + eps I/d, eps in (0, 1].
StateFamily regularized_pure_family(std::function<PureState(double)> state, double epsilon);

/// c_n = e^{-mu/2} mu^{n/2} / sqrt(n!), mu = -ln theta, n < truncation.
/// Throws NumericalError when the discarded mass exceeds 1e-10.
PureState coherent_state(double theta, std::size_t truncation = 60);

/// 4 (<d psi|d psi> - |<d psi|psi>|^2). Throws NumericalError
/// ("increase truncation") when | |psi|^2 - 1 | > leakage_tol.
double qfi_pure(const PureState& psi, double leakage_tol = 1e-10);

/// Q_11 of regularized_pure_family(state, eps) at theta for each eps,
/// extrapolated to eps -> 0 through all points (Neville).
double regularized_qfi_limit(const std::function<PureState(double)>& state, double theta,
                             std::span<const double> epsilons, const Tolerances& tol = {});

}  // namespace pebounds
