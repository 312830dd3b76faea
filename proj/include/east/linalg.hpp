#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace eastsim {

using MatVec = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct LanczosResult {
  double eigenvalue = 0.0;
  Eigen::VectorXcd eigenvector;
  int iterations = 0;
  bool converged = false;
};

/// Lowest eigenpair of a Hermitian operator given as a matvec. Full
/// reorthogonalization; converges on the Ritz-value change.
LanczosResult lanczos_lowest(const MatVec& apply, const Eigen::VectorXcd& init,
                             double tol = 1e-12, int max_iter = 250);

/// One step of exp(-i H dt) |psi> in a Krylov subspace of dimension at
/// most krylov_dim. Preserves the input norm.
Eigen::VectorXcd krylov_expm_step(const MatVec& apply,
                                  const Eigen::VectorXcd& psi, double dt,
                                  int krylov_dim = 30);

}  // namespace eastsim
