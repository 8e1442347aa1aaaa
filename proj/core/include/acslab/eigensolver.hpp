#pragma once

// Matrix-free Krylov and block eigensolvers on Eigen vectors.

#include <functional>

#include <Eigen/Dense>

namespace acslab::linalg {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using BlockMap = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

struct KrylovResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Preconditioned conjugate gradients for a symmetric positive semidefinite
/// operator on a consistent right-hand side. An empty preconditioner is the identity.
KrylovResult pcg(const LinearMap& a, const Eigen::VectorXd& b, const LinearMap& precond,
                 double tol, int max_iter, const Eigen::VectorXd& x0 = {});

/// Right-preconditioned restarted GMRES.
KrylovResult gmres(const LinearMap& a, const Eigen::VectorXd& b, const LinearMap& precond,
                   double tol, int max_iter, int restart = 40,
                   const Eigen::VectorXd& x0 = {});

struct EigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;
  int iterations = 0;
  bool converged = false;
};

struct LobpcgOptions {
  int wanted = 4;
  double tol = 1e-9;
  int max_iter = 300;
  /// Residuals are measured relative to max(|λ|, scale).
  double scale = 1.0;
};

/// Smallest eigenpairs of A x = λ B x with A symmetric and B symmetric
/// positive definite on the search space. x0 fixes the block size.
EigenResult lobpcg(const BlockMap& a, const BlockMap& b, const BlockMap& precond,
                   const Eigen::MatrixXd& x0, const LobpcgOptions& options);

}  // namespace acslab::linalg
