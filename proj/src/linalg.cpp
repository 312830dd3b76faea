#include "east/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace eastsim {

namespace {

// Builds a Lanczos basis with full reorthogonalization. Returns the
// number of vectors produced; alpha/beta hold the tridiagonal entries.
int lanczos_basis(const MatVec& apply, const Eigen::VectorXcd& init,
                  int max_dim, std::vector<Eigen::VectorXcd>& basis,
                  Eigen::VectorXd& alpha, Eigen::VectorXd& beta,
                  double breakdown_tol = 1e-12) {
  const double init_norm = init.norm();
  if (init_norm <= 0.0) throw std::invalid_argument("zero start vector");
  basis.clear();
  basis.push_back(init / init_norm);
  alpha.resize(max_dim);
  beta.resize(max_dim);
  int m = 0;
  for (; m < max_dim; ++m) {
    Eigen::VectorXcd w = apply(basis[m]);
    alpha(m) = std::real(basis[m].dot(w));
    w -= alpha(m) * basis[m];
    if (m > 0) w -= beta(m - 1) * basis[m - 1];
    for (const auto& v : basis) w -= v.dot(w) * v;  // reorthogonalize
    beta(m) = w.norm();
    if (beta(m) < breakdown_tol) {
      ++m;
      break;
    }
    if (m + 1 < max_dim) basis.push_back(w / beta(m));
  }
  return m;
}

}  // namespace

LanczosResult lanczos_lowest(const MatVec& apply, const Eigen::VectorXcd& init,
                             double tol, int max_iter) {
  LanczosResult result;
  Eigen::VectorXcd current = init;
  double previous = std::numeric_limits<double>::infinity();
  // Restarted: each cycle builds up to 60 vectors from the best Ritz vector.
  const int cycle_dim = 60;
  int used = 0;
  while (used < max_iter) {
    std::vector<Eigen::VectorXcd> basis;
    Eigen::VectorXd alpha, beta;
    int m = lanczos_basis(apply, current, std::min(cycle_dim, max_iter - used),
                          basis, alpha, beta);
    used += m;
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha(i);
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    double value = es.eigenvalues()(0);
    Eigen::VectorXcd ritz = Eigen::VectorXcd::Zero(init.size());
    for (int i = 0; i < m; ++i) ritz += es.eigenvectors()(i, 0) * basis[i];
    ritz.normalize();
    current = ritz;
    result.eigenvalue = value;
    result.eigenvector = ritz;
    result.iterations = used;
    if (std::abs(value - previous) < tol || m < 2) {
      result.converged = true;
      break;
    }
    previous = value;
  }
  return result;
}

Eigen::VectorXcd krylov_expm_step(const MatVec& apply,
                                  const Eigen::VectorXcd& psi, double dt,
                                  int krylov_dim) {
  if (!std::isfinite(dt)) throw std::invalid_argument("non-finite time step");
  const double norm = psi.norm();
  if (norm == 0.0) return psi;
  std::vector<Eigen::VectorXcd> basis;
  Eigen::VectorXd alpha, beta;
  int m = lanczos_basis(apply, psi, krylov_dim, basis, alpha, beta);
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    tri(i, i) = alpha(i);
    if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
  const std::complex<double> minus_i(0.0, -1.0);
  Eigen::VectorXcd phases(m);
  for (int i = 0; i < m; ++i)
    phases(i) = std::exp(minus_i * es.eigenvalues()(i) * dt);
  Eigen::VectorXcd coeff =
      es.eigenvectors().cast<std::complex<double>>() *
      (phases.array() *
       es.eigenvectors().row(0).transpose().cast<std::complex<double>>().array())
          .matrix();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (int i = 0; i < m; ++i) out += coeff(i) * basis[i];
  return norm * out;
}

}  // namespace eastsim
