#include "pebounds/quantum.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pebounds/error.hpp"

namespace pebounds {
namespace {

void require_hermitian(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) throw InvalidArgument(std::string(what) + " must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument(std::string(what) + " must be Hermitian");
  }
}

}  // namespace

DensityEigen DensityEigen::from_matrix(const CMatrix& rho) {
  require_hermitian(rho, "density matrix");
  if (std::abs(rho.trace() - std::complex<double>(1.0, 0.0)) > 1e-12) {
    throw InvalidArgument("density matrix must have unit trace");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (rho + rho.adjoint()));
  if (eig.info() != Eigen::Success) throw NumericalError("density eigendecomposition failed");
  Eigen::VectorXd p = eig.eigenvalues();
  if (p.minCoeff() < -1e-12) throw InvalidArgument("density matrix has a negative eigenvalue");
  p = p.cwiseMax(0.0);
  return DensityEigen(std::move(p), eig.eigenvectors());
}

CMatrix DensityEigen::matrix() const {
  return basis_ * probabilities_.cast<std::complex<double>>().asDiagonal() * basis_.adjoint();
}

CMatrix omega_apply(const DensityEigen& rho, const CMatrix& x, double rank_tol) {
  require_hermitian(x, "Omega argument");
  const auto d = static_cast<Eigen::Index>(rho.dimension());
  if (x.rows() != d) throw InvalidArgument("Omega argument dimension mismatch");
  const Eigen::VectorXd& p = rho.probabilities();
  if (p.minCoeff() <= rank_tol) {
    throw NumericalError("density matrix is rank deficient; regularize first");
  }
  const CMatrix& v = rho.basis();
  CMatrix in_basis = v.adjoint() * x * v;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) in_basis(i, j) *= 2.0 / (p[i] + p[j]);
  }
  return v * in_basis * v.adjoint();
}

RowMatrix q_ecrb_matrix(const StateFamily& family, std::span<const double> test_points,
                        double theta, const Tolerances& tol) {
  if (test_points.empty()) throw InvalidArgument("q_ecrb_matrix: no test points");
  const DensityEigen rho = DensityEigen::from_matrix(family.density(theta));
  const auto n = static_cast<Eigen::Index>(test_points.size());
  std::vector<CMatrix> derivs;
  std::vector<CMatrix> omegas;
  for (double tk : test_points) {
    derivs.push_back(family.derivative(tk));
    omegas.push_back(omega_apply(rho, derivs.back(), tol.rank));
  }
  RowMatrix q(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      // Tr{A B} = sum_ij A_ij B_ji
      q(k, l) = (derivs[k].transpose().cwiseProduct(omegas[l])).sum().real();
    }
  }
  return (0.5 * (q + q.transpose())).eval();
}

BoundResult quantum_ecrb_bound(const StateFamily& family, std::span<const double> test_points,
                               double theta, const Tolerances& tol) {
  const RowMatrix q = q_ecrb_matrix(family, test_points, theta, tol);
  return evaluate_bound(q, Vector::Ones(q.rows()), tol);
}

StateFamily qubit_dephased_family(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("r must lie in (0, 1]");
  StateFamily f;
  f.density = [r](double theta) {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 0.5 * (1.0 + r * std::cos(theta));
    rho(1, 1) = 0.5 * (1.0 - r * std::cos(theta));
    return rho;
  };
  f.derivative = [r](double theta) {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = -0.5 * r * std::sin(theta);
    d(1, 1) = 0.5 * r * std::sin(theta);
    return d;
  };
  return f;
}

StateFamily regularized_pure_family(std::function<PureState(double)> state, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
  StateFamily f;
  f.density = [state, epsilon](double theta) {
    const PureState psi = state(theta);
    const auto d = psi.amplitudes.size();
    CMatrix rho = (1.0 - epsilon) * psi.amplitudes * psi.amplitudes.adjoint();
    rho.diagonal().array() += epsilon / static_cast<double>(d);
    return rho;
  };
  f.derivative = [state, epsilon](double theta) {
    const PureState psi = state(theta);
    const CMatrix outer = psi.damplitudes * psi.amplitudes.adjoint();
    return CMatrix((1.0 - epsilon) * (outer + outer.adjoint()));
  };
  return f;
}

PureState coherent_state(double theta, std::size_t truncation) {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("coherent_state: theta must lie in (0, 1)");
  if (truncation < 2) throw InvalidArgument("coherent_state: truncation must be >= 2");
  const double mu = -std::log(theta);
  const double log_mu = std::log(mu);
  const auto n = static_cast<Eigen::Index>(truncation);
  PureState psi{CVector(n), CVector(n)};
  double kept = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const double c = std::exp(0.5 * (kd * log_mu - mu - std::lgamma(kd + 1.0)));
    // dc/dtheta = dc/dmu * dmu/dtheta, dmu/dtheta = -1/theta
    const double dc = c * (kd / (2.0 * mu) - 0.5) * (-1.0 / theta);
    psi.amplitudes[k] = c;
    psi.damplitudes[k] = dc;
    kept += c * c;
  }
  if (1.0 - kept > 1e-10) {
    throw NumericalError("coherent_state: truncation " + std::to_string(truncation) +
                         " discards mass " + std::to_string(1.0 - kept));
  }
  return psi;
}

double qfi_pure(const PureState& psi, double leakage_tol) {
  if (psi.amplitudes.size() != psi.damplitudes.size() || psi.amplitudes.size() == 0) {
    throw InvalidArgument("qfi_pure: amplitude/derivative size mismatch");
  }
  if (std::abs(psi.amplitudes.squaredNorm() - 1.0) > leakage_tol) {
    throw NumericalError("qfi_pure: state norm deficit; increase truncation");
  }
  const double dd = psi.damplitudes.squaredNorm();
  const std::complex<double> overlap = psi.damplitudes.dot(psi.amplitudes);  // <dpsi|psi>
  return 4.0 * (dd - std::norm(overlap));
}

double regularized_qfi_limit(const std::function<PureState(double)>& state, double theta,
                             std::span<const double> epsilons, const Tolerances& tol) {
  if (epsilons.empty()) throw InvalidArgument("regularized_qfi_limit: no epsilons");
  const double point[] = {theta};
  std::vector<double> x(epsilons.begin(), epsilons.end());
  std::vector<double> y;
  for (double eps : epsilons) {
    y.push_back(q_ecrb_matrix(regularized_pure_family(state, eps), point, theta, tol)(0, 0));
  }
  // Neville tableau evaluated at 0
  for (std::size_t level = 1; level < x.size(); ++level) {
    for (std::size_t i = 0; i + level < x.size(); ++i) {
      y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    }
  }
  return y[0];
}

}  // namespace pebounds
