#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lamespec/disk_spectrum.hpp"
#include "support/disk_oracle.hpp"

using namespace lamespec;

namespace {

double max_norm_on_circle(const VectorField2D& u, double r) {
  double m = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 64;
    m = std::max(m, u(r * std::cos(t), r * std::sin(t)).norm());
  }
  return m;
}

}  // namespace

TEST(DiskSpectrum, NuStar) { EXPECT_NEAR(nu_star(), 0.3498957742, 1e-9); }

TEST(DiskSpectrum, SimpleBranchAboveThreshold) {
  for (double nu : {0.36, 0.40, 0.45, 0.49}) {
    const auto p = ElasticityParams::from_poisson(nu, 1.7);
    const DiskEigenvalue e = first_eigenvalue(p);
    EXPECT_EQ(e.regime, DiskRegime::SimpleBranch);
    EXPECT_NEAR(e.value, 1.7 * j11() * j11(), 1e-10 * e.value);
    EXPECT_FALSE(e.mode_k.has_value());
    for (int k = 1; k <= 20; ++k) EXPECT_FALSE(first_transcendental_root(k, p).has_value()) << "nu=" << nu << " k=" << k;
  }
}

TEST(DiskSpectrum, DoubleBranchMatchesDenseScanOracle) {
  for (double nu : {-0.5, 0.0, 0.1, 0.2, 0.3, 0.34}) {
    const auto p = ElasticityParams::from_poisson(nu, 1.0);
    const DiskEigenvalue e = first_eigenvalue(p);
    EXPECT_EQ(e.regime, DiskRegime::TranscendentalDouble);
    EXPECT_LT(e.value, j11() * j11());
    EXPECT_NEAR(e.value, oracle::disk_first_eigenvalue(nu, 1.0), 1e-9 * e.value) << "nu=" << nu;
  }
}

TEST(DiskSpectrum, FrozenDoubleBranchValues) {
  // Produced by oracle::disk_first_eigenvalue.
  const std::pair<double, double> cases[] = {
      {0.0, 8.612599932126}, {0.1, 9.301983239422}, {0.2, 10.433732870211}, {0.3, 12.622615109772}, {0.34, 14.184796330436}};
  for (const auto& [nu, value] : cases)
    EXPECT_NEAR(first_eigenvalue(ElasticityParams::from_poisson(nu, 1.0)).value, value, 1e-9 * value) << "nu=" << nu;
}

TEST(DiskSpectrum, ModeOneMinimizesInDoubleRegime) {
  for (double nu = -0.9; nu < nu_star() - 1e-4; nu += 0.01) {
    const DiskEigenvalue e = first_eigenvalue(ElasticityParams::from_poisson(nu, 1.0));
    ASSERT_TRUE(e.mode_k.has_value());
    EXPECT_EQ(*e.mode_k, 1) << "nu=" << nu;
  }
}

TEST(DiskSpectrum, TripleAtThreshold) {
  const DiskEigenvalue e = first_eigenvalue(ElasticityParams::from_poisson(nu_star(), 1.0));
  EXPECT_EQ(e.regime, DiskRegime::TripleAtThreshold);
  EXPECT_NEAR(e.value, j11() * j11(), 1e-12);
  EXPECT_EQ(to_string(e.regime), "triple");
}

TEST(DiskSpectrum, ContinuousAcrossThreshold) {
  const double below = first_eigenvalue(ElasticityParams::from_poisson(nu_star() - 1e-6, 1.0)).value;
  EXPECT_NEAR(below, j11() * j11(), 1e-3);
  EXPECT_LT(below, j11() * j11());
}

TEST(DiskSpectrum, ScalesLinearlyInMu) {
  for (double nu : {0.1, 0.4}) {
    const double a = first_eigenvalue(ElasticityParams::from_poisson(nu, 1.0)).value;
    const double b = first_eigenvalue(ElasticityParams::from_poisson(nu, 3.0)).value;
    EXPECT_NEAR(b, 3.0 * a, 1e-10 * b);
  }
}

TEST(DiskSpectrum, TranscendentalIdentities) {
  const auto p = ElasticityParams::from_poisson(0.25, 1.3);
  const WaveScalings w = p.wave();
  for (int k = 1; k <= 6; ++k)
    for (double omega : {0.7, 1.9, 3.3, 4.1}) {
      const double f = transcendental_f(k, omega, p);
      EXPECT_NEAR(f, transcendental_f_lower_form(k, omega, p), 1e-11) << "k=" << k;
      const double x1 = w.a1 * omega, x2 = w.a2 * omega;
      EXPECT_NEAR(transcendental_determinant(k, omega, p), -x1 * x2 * f, 1e-11);
      EXPECT_NEAR(transcendental_determinant(k, omega, p), oracle::disk_determinant(k, omega, p.lambda(), p.mu()), 1e-11);
    }
  EXPECT_THROW(transcendental_f(0, 1.0, p), DomainError);
  EXPECT_THROW(transcendental_f(1, 0.0, p), DomainError);
}

TEST(DiskSpectrum, StableFormPositiveNearZero) {
  const auto p = ElasticityParams::from_poisson(0.2, 1.0);
  for (int k = 1; k <= 20; ++k) EXPECT_GT(transcendental_f(k, 1e-3, p), 0.0) << "k=" << k;
}

TEST(DiskSpectrum, RootIsRootOfF) {
  const auto p = ElasticityParams::from_poisson(0.2, 1.0);
  const DiskEigenvalue e = first_eigenvalue(p);
  ASSERT_TRUE(e.omega_root.has_value());
  EXPECT_NEAR(transcendental_f(1, *e.omega_root, p), 0.0, 1e-10);
  EXPECT_NEAR(*e.omega_root * *e.omega_root, e.value, 1e-12);
}

TEST(DiskEigenfunction, SimpleBranchIsNormalisedDivergenceFreeAndVanishes) {
  const auto p = ElasticityParams::from_poisson(0.42, 1.0);
  const DiskEigenvalue e = first_eigenvalue(p);
  const VectorField2D u = eigenfunction(p, e);
  EXPECT_LT(max_norm_on_circle(u, 1.0), 1e-12);
  // L2 norm by the midpoint rule in polar coordinates.
  double l2 = 0.0;
  const int nr = 400, nt = 64;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      const double r = (i + 0.5) / nr, t = 2.0 * std::numbers::pi * j / nt;
      l2 += u(r * std::cos(t), r * std::sin(t)).squaredNorm() * r * (1.0 / nr) * (2.0 * std::numbers::pi / nt);
    }
  EXPECT_NEAR(l2, 1.0, 1e-5);
  const double h = 1e-5;
  for (const Eigen::Vector2d& pt : {Eigen::Vector2d(0.3, 0.1), Eigen::Vector2d(-0.5, 0.6), Eigen::Vector2d(0.0, 0.0)}) {
    const double div = (u(pt.x() + h, pt.y()).x() - u(pt.x() - h, pt.y()).x() + u(pt.x(), pt.y() + h).y() -
                        u(pt.x(), pt.y() - h).y()) / (2.0 * h);
    EXPECT_NEAR(div, 0.0, 1e-8);
  }
  EXPECT_THROW(eigenfunction(p, e, DiskBranch::Secondary), DomainError);
}

TEST(DiskEigenfunction, SatisfiesPdeInBothRegimes) {
  for (double nu : {-0.3, 0.1, 0.3, 0.4}) {
    const auto p = ElasticityParams::from_poisson(nu, 1.0);
    const DiskEigenvalue e = first_eigenvalue(p);
    for (DiskBranch b : {DiskBranch::Primary, DiskBranch::Secondary}) {
      if (e.regime != DiskRegime::TranscendentalDouble && b == DiskBranch::Secondary) continue;
      const VectorField2D u = eigenfunction(p, e, b);
      const double scale = e.value * max_norm_on_circle(u, 0.5);
      ASSERT_GT(scale, 0.0);
      EXPECT_LT(max_norm_on_circle(u, 1.0), 1e-9 * max_norm_on_circle(u, 0.5)) << "nu=" << nu;
      for (const Eigen::Vector2d& pt : {Eigen::Vector2d(0.2, 0.1), Eigen::Vector2d(-0.4, 0.55), Eigen::Vector2d(0.7, -0.3)})
        EXPECT_LT(pde_residual(u, p, e.value, pt, 1e-3).norm(), 1e-4 * scale) << "nu=" << nu;
    }
  }
}

TEST(DiskEigenfunction, DoubleBranchFieldsAreIndependent) {
  const auto p = ElasticityParams::from_poisson(0.2, 1.0);
  const DiskEigenvalue e = first_eigenvalue(p);
  const VectorField2D a = eigenfunction(p, e, DiskBranch::Primary), b = eigenfunction(p, e, DiskBranch::Secondary);
  // Secondary is the primary rotated by a quarter turn of the mode, so the Gram matrix is well conditioned.
  double aa = 0, bb = 0, ab = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 40; ++j) {
      const double r = (i + 0.5) / 50, t = 2.0 * std::numbers::pi * j / 40;
      const Eigen::Vector2d ua = a(r * std::cos(t), r * std::sin(t)), ub = b(r * std::cos(t), r * std::sin(t));
      aa += ua.squaredNorm() * r;
      bb += ub.squaredNorm() * r;
      ab += ua.dot(ub) * r;
    }
  EXPECT_LT(std::abs(ab) / std::sqrt(aa * bb), 1e-6);
}

TEST(DiskEigenfunction, ResidualRejectsOutsidePoints) {
  const auto p = ElasticityParams::from_poisson(0.4, 1.0);
  const DiskEigenvalue e = first_eigenvalue(p);
  EXPECT_THROW(pde_residual(eigenfunction(p, e), p, e.value, Eigen::Vector2d(1.0, 0.0)), DomainError);
  EXPECT_THROW(first_eigenvalue(p, 0), DomainError);
}
