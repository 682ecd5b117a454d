#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "lamespec/error.hpp"
#include "lamespec/fem/assembly.hpp"

namespace lamespec::fem {

struct SolverOptions {
  double tol = 1e-8;       // on ||A v - theta M v|| / (theta ||M v||)
  int max_iterations = 500;
  std::uint64_t seed = 12345;
};

/// Smallest generalized eigenpairs; vectors are M-orthonormal.
struct EigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;
  Eigen::VectorXd gaps;  // gaps[i] = (values[i+1] - values[i]) / values[i]
  int iterations = 0;

  /// Relative gap between the first two values (infinity when only one was requested).
  double gap() const { return gaps.size() > 0 ? gaps[0] : std::numeric_limits<double>::infinity(); }
};

inline constexpr double kMultiplicityGap = 1e-3;

namespace detail {

// Park-Miller minimal standard generator, mapped to (-1, 1).
class StartBlockStream {
 public:
  explicit StartBlockStream(std::uint64_t seed) : state_(seed % 2147483647ULL) {
    if (state_ == 0) state_ = 1;
  }
  double next() {
    state_ = (state_ * 48271ULL) % 2147483647ULL;
    return 2.0 * static_cast<double>(state_) / 2147483647.0 - 1.0;
  }

 private:
  std::uint64_t state_;
};

// Modified Gram-Schmidt in the M inner product, applied twice for stability.
inline void m_orthonormalize(Eigen::MatrixXd& Y, const SparseMatrix& M) {
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd MY = M * Y;
    for (Eigen::Index j = 0; j < Y.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double c = Y.col(i).dot(MY.col(j));
        Y.col(j) -= c * Y.col(i);
        MY.col(j) -= c * MY.col(i);
      }
      const double nrm = std::sqrt(std::max(0.0, Y.col(j).dot(MY.col(j))));
      if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalFailure("subspace iteration lost rank");
      Y.col(j) /= nrm;
      MY.col(j) /= nrm;
    }
  }
}

}  // namespace detail

/// n_eigs smallest eigenpairs of A x = theta M x by subspace (block inverse)
/// iteration with Rayleigh-Ritz, block size n_eigs + 2, A factored once.
inline EigenResult solve_smallest(const SymmetricSparsePencil& pencil, int n_eigs, const SolverOptions& opt = {}) {
  const Eigen::Index n = static_cast<Eigen::Index>(pencil.dof_count());
  if (n_eigs < 1) throw DomainError("n_eigs must be >= 1");
  const Eigen::Index p = std::min<Eigen::Index>(n_eigs + 2, n);
  if (n_eigs > n) throw DomainError("more eigenpairs requested than unknowns");

  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(pencil.stiffness);
  if (ldlt.info() != Eigen::Success) throw NumericalFailure("factorization failed: stiffness matrix is not positive definite");
  if (ldlt.vectorD().minCoeff() <= 0.0) throw NumericalFailure("factorization failed: stiffness matrix is not positive definite");

  detail::StartBlockStream rng(opt.seed);
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = rng.next();
  detail::m_orthonormalize(X, pencil.mass);

  EigenResult res;
  res.residuals.resize(n_eigs);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::MatrixXd Y = ldlt.solve(pencil.mass * X);
    if (ldlt.info() != Eigen::Success) throw NumericalFailure("triangular solve failed");
    detail::m_orthonormalize(Y, pencil.mass);
    const Eigen::MatrixXd AY = pencil.stiffness * Y;
    Eigen::MatrixXd H = Y.transpose() * AY;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(H);
    if (small.info() != Eigen::Success) throw NumericalFailure("Rayleigh-Ritz eigensolve failed");
    X = Y * small.eigenvectors();
    const Eigen::MatrixXd AX = AY * small.eigenvectors();
    const Eigen::MatrixXd MX = pencil.mass * X;
    const Eigen::VectorXd theta = small.eigenvalues();
    bool converged = true;
    for (int i = 0; i < n_eigs; ++i) {
      const double r = (AX.col(i) - theta[i] * MX.col(i)).norm() / (std::abs(theta[i]) * MX.col(i).norm());
      res.residuals[i] = r;
      if (!(r <= opt.tol)) converged = false;
    }
    if (converged) {
      res.values = theta.head(n_eigs);
      res.vectors = X.leftCols(n_eigs);
      res.iterations = it;
      res.gaps.resize(std::max(0, n_eigs - 1));
      for (int i = 0; i + 1 < n_eigs; ++i) res.gaps[i] = (res.values[i + 1] - res.values[i]) / res.values[i];
      if (res.values.minCoeff() <= 0.0) throw NumericalFailure("nonpositive eigenvalue from an SPD pencil");
      return res;
    }
  }
  throw NumericalFailure("subspace iteration did not converge in " + std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace lamespec::fem
