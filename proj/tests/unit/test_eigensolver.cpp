#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "lamespec/fem/assembly.hpp"
#include "lamespec/fem/eigensolver.hpp"

using namespace lamespec;
using namespace lamespec::fem;

namespace {

SymmetricSparsePencil diagonal_pencil(const Eigen::VectorXd& a, const Eigen::VectorXd& m) {
  SymmetricSparsePencil p;
  const Eigen::Index n = a.size();
  p.stiffness.resize(n, n);
  p.mass.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p.stiffness.insert(i, i) = a[i];
    p.mass.insert(i, i) = m[i];
  }
  p.dof_node.resize(n);
  p.dof_component.assign(n, 0);
  return p;
}

}  // namespace

TEST(Eigensolver, DiagonalPencil) {
  const int n = 50;
  Eigen::VectorXd a(n), m(n);
  for (int i = 0; i < n; ++i) {
    a[i] = 1.0 + ((i * 17) % n);
    m[i] = 1.0 + 0.5 * (i % 3);
  }
  Eigen::VectorXd ratio = a.cwiseQuotient(m);
  std::sort(ratio.data(), ratio.data() + n);
  const EigenResult r = solve_smallest(diagonal_pencil(a, m), 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.values[i], ratio[i], 1e-9 * ratio[i]);
}

TEST(Eigensolver, MatchesDenseSolverOnFemPencil) {
  const SymmetricSparsePencil pen = assemble_lame(mesh_ellipse(1.3, 3, 16), ElasticityParams::from_poisson(0.3, 1.0));
  const Eigen::MatrixXd A(pen.stiffness), M(pen.mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(A, M);
  const EigenResult r = solve_smallest(pen, 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.values[i], dense.eigenvalues()[i], 1e-8 * dense.eigenvalues()[i]);
  // M-orthonormal Ritz vectors with small residuals.
  const Eigen::MatrixXd G = r.vectors.transpose() * (pen.mass * r.vectors);
  EXPECT_LT((G - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-10);
  for (int i = 0; i < 4; ++i) EXPECT_LE(r.residuals[i], 1e-8);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.gaps[i], (r.values[i + 1] - r.values[i]) / r.values[i], 1e-15);
}

TEST(Eigensolver, DeterministicForFixedSeed) {
  const SymmetricSparsePencil pen = assemble_lame(mesh_ellipse(1.0, 4, 32), ElasticityParams::from_poisson(0.2, 1.0));
  const EigenResult a = solve_smallest(pen, 3), b = solve_smallest(pen, 3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a.values[i], b.values[i]);
  SolverOptions other;
  other.seed = 987654321;
  const EigenResult c = solve_smallest(pen, 3, other);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(c.values[i], a.values[i], 1e-9 * a.values[i]);
}

TEST(Eigensolver, Failures) {
  Eigen::VectorXd a(4), m = Eigen::VectorXd::Ones(4);
  a << 1.0, -2.0, 3.0, 4.0;
  EXPECT_THROW(solve_smallest(diagonal_pencil(a, m), 1), NumericalFailure);
  a << 1.0, 2.0, 3.0, 4.0;
  EXPECT_THROW(solve_smallest(diagonal_pencil(a, m), 0), DomainError);
  EXPECT_THROW(solve_smallest(diagonal_pencil(a, m), 5), DomainError);
  const SymmetricSparsePencil pen = assemble_lame(mesh_ellipse(1.0, 4, 32), ElasticityParams::from_poisson(0.2, 1.0));
  SolverOptions tight;
  tight.max_iterations = 1;
  tight.tol = 1e-14;
  EXPECT_THROW(solve_smallest(pen, 3, tight), NumericalFailure);
}

TEST(Eigensolver, GapOfSingleMode) {
  Eigen::VectorXd a(3), m = Eigen::VectorXd::Ones(3);
  a << 2.0, 1.0, 3.0;
  const EigenResult r = solve_smallest(diagonal_pencil(a, m), 1);
  EXPECT_NEAR(r.values[0], 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(r.gap()));
}
