#include <cmath>
#include <numbers>
#include <algorithm>
#include <random>
#include <set>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <gtest/gtest.h>

#include "lamespec/disk_perturbation.hpp"

using namespace lamespec;

namespace {

const double kNus[] = {0.36, 0.40, 0.45};

// C_k from Boost Bessel values, written from the shape-Hessian expression directly.
double big_c_boost(int k, double nu) {
  const double j = boost::math::cyl_bessel_j_zero(1.0, 1);
  const double w = std::sqrt((1.0 - 2.0 * nu) / (2.0 - 2.0 * nu));  // sqrt(mu / (lambda + 2 mu))
  using boost::math::cyl_bessel_j;
  using boost::math::cyl_bessel_j_prime;
  const double jk = cyl_bessel_j(k, j), jkp = cyl_bessel_j_prime(k, j);
  const double wjk = cyl_bessel_j(k, w * j), wjkp = cyl_bessel_j_prime(k, w * j);
  return 2.0 * j * j * w * k * wjkp * jk / (k * k * jk * wjk - j * j * w * wjkp * jkp);
}

FourierPerturbation random_perturbation(std::mt19937_64& rng, int kmin, int kmax) {
  std::uniform_int_distribution<int> count(1, 6), mode(kmin, kmax);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  FourierPerturbation phi;
  const int n = count(rng);
  std::set<int> used;
  while (static_cast<int>(used.size()) < n) used.insert(mode(rng));
  for (int k : used) phi.modes.push_back({k, coef(rng), coef(rng)});
  return phi;
}

}  // namespace

TEST(Perturbation, BigCMatchesBoostOracle) {
  for (double nu : kNus)
    for (int k = 1; k <= 50; ++k) {
      const auto p = ElasticityParams::from_poisson(nu, 1.0);
      const double ref = big_c_boost(k, nu);
      EXPECT_NEAR(big_c_coefficient(k, p), ref, 1e-10 * std::max(1.0, std::abs(ref))) << "nu=" << nu << " k=" << k;
    }
}

TEST(Perturbation, BigCIsOnePlusSmallC) {
  for (double nu : kNus)
    for (int k = 1; k <= 30; ++k) {
      const auto p = ElasticityParams::from_poisson(nu, 2.0);
      EXPECT_NEAR(big_c_coefficient(k, p), 1.0 + c_coefficient(k, p), 1e-10 * (1.0 + std::abs(c_coefficient(k, p))));
    }
}

TEST(Perturbation, TranslationModeIsNeutral) {
  for (double nu : kNus) {
    const auto p = ElasticityParams::from_poisson(nu, 1.0);
    EXPECT_NEAR(big_c_coefficient(1, p), 0.0, 1e-9);
    EXPECT_NEAR(c_coefficient(1, p), -1.0, 1e-9);
  }
}

TEST(Perturbation, PositiveForHigherModes) {
  for (double nu : kNus)
    for (int k = 2; k <= 50; ++k) EXPECT_GT(big_c_coefficient(k, ElasticityParams::from_poisson(nu, 1.0)), 0.0);
}

TEST(Perturbation, QuadraticGrowthConstant) {
  // C_k / (k (k + 1)) approaches 4 / (j11 (1 + w^2)), w^2 = mu / (lambda + 2 mu).
  for (double nu : kNus) {
    const auto p = ElasticityParams::from_poisson(nu, 1.0);
    const double w2 = p.wave().omega_ratio * p.wave().omega_ratio;
    const double limit = 4.0 / (j11() * (1.0 + w2));
    const double r80 = big_c_coefficient(80, p) / (80.0 * 81.0);
    const double r40 = big_c_coefficient(40, p) / (40.0 * 41.0);
    EXPECT_NEAR(r80, limit, 2e-3 * limit) << "nu=" << nu;
    EXPECT_LT(std::abs(r80 - limit), std::abs(r40 - limit));
  }
}

TEST(Perturbation, CoercivityConstantFrozen) {
  // Minimum over 2 <= k <= 60 of pi Lambda C_k / (k^2 + 1); attained at k = 2.
  const std::pair<double, double> cases[] = {{0.36, 29.40778276}, {0.40, 31.0844023}, {0.45, 33.20149475}};
  for (const auto& [nu, a0] : cases) {
    const Coercivity c = coercivity_constant(ElasticityParams::from_poisson(nu, 1.0));
    EXPECT_NEAR(c.a0, a0, 1e-6);
    EXPECT_EQ(c.argmin_k, 2);
  }
}

TEST(Perturbation, SecondDerivativePositiveAndCoercive) {
  std::mt19937_64 rng(20261015);
  for (double nu : kNus) {
    const auto p = ElasticityParams::from_poisson(nu, 1.0);
    const Coercivity c = coercivity_constant(p);
    for (int i = 0; i < 100; ++i) {
      const FourierPerturbation phi = random_perturbation(rng, 2, 30);
      const double d2 = second_derivative_F(p, phi);
      EXPECT_GT(d2, 0.0);
      EXPECT_GE(d2, c.a0 * phi.h1_norm_sq_high() * (1.0 - 1e-12));
    }
  }
}

TEST(Perturbation, SecondDerivativeIgnoresTranslationsAndRotations) {
  const auto p = ElasticityParams::from_poisson(0.4, 1.0);
  FourierPerturbation phi;
  phi.modes = {{2, 0.3, -0.2}, {5, 0.1, 0.4}};
  const double base = second_derivative_F(p, phi);
  FourierPerturbation shifted = phi;
  shifted.modes.push_back({1, 0.7, -0.9});
  EXPECT_NEAR(second_derivative_F(p, shifted), base, 1e-12 * base);
  // Rotating the boundary by theta0 rotates each (alpha_k, beta_k) pair.
  const double t0 = 0.37;
  FourierPerturbation rot;
  for (const auto& m : phi.modes) {
    const double c = std::cos(m.k * t0), s = std::sin(m.k * t0);
    rot.modes.push_back({m.k, c * m.alpha - s * m.beta, s * m.alpha + c * m.beta});
  }
  EXPECT_NEAR(second_derivative_F(p, rot), base, 1e-12 * base);
  // Mode order does not matter.
  FourierPerturbation rev = phi;
  std::reverse(rev.modes.begin(), rev.modes.end());
  EXPECT_DOUBLE_EQ(second_derivative_F(p, rev), base);
}

TEST(Perturbation, ShapeDerivatives) {
  const auto p = ElasticityParams::from_poisson(0.4, 1.0);
  const double lam = j11() * j11();
  FourierPerturbation phi;
  phi.alpha0 = 0.25;
  phi.modes = {{3, 0.5, 0.0}};
  EXPECT_DOUBLE_EQ(first_shape_derivative(lam, phi), -2.0 * lam * 0.25);
  const double expected = lam * (6.0 * 0.0625 + c_coefficient(3, p) * 0.25);
  EXPECT_NEAR(second_shape_derivative(p, phi), expected, 1e-12 * std::abs(expected));
}

TEST(Perturbation, RequiresSimpleRegime) {
  const auto p = ElasticityParams::from_poisson(0.3, 1.0);
  EXPECT_THROW(c_coefficient(2, p), DomainError);
  EXPECT_THROW(coercivity_constant(p), DomainError);
  EXPECT_THROW(big_c_coefficient(2, ElasticityParams::from_poisson(nu_star(), 1.0)), DomainError);
}

TEST(Perturbation, InvalidPerturbations) {
  const auto p = ElasticityParams::from_poisson(0.4, 1.0);
  FourierPerturbation dup;
  dup.modes = {{2, 1.0, 0.0}, {2, 0.0, 1.0}};
  EXPECT_THROW(second_derivative_F(p, dup), DomainError);
  FourierPerturbation high;
  high.modes = {{61, 1.0, 0.0}};
  EXPECT_THROW(second_derivative_F(p, high), DomainError);
  FourierPerturbation zero;
  zero.modes = {{0, 1.0, 0.0}};
  EXPECT_THROW(zero.validate(), DomainError);
  EXPECT_THROW(coercivity_constant(p, 1), DomainError);
}

TEST(M11Certificate, NonzeroBelowThresholdAndLinear) {
  for (double nu : {-0.5, 0.1, 0.3, 0.34}) {
    const auto p = ElasticityParams::from_poisson(nu, 1.0);
    const DiskEigenvalue e = first_eigenvalue(p);
    const M11Witness w1 = m11_gateaux(*e.mode_k, p, e, 1.0);
    const M11Witness w2 = m11_gateaux(*e.mode_k, p, e, -2.5);
    EXPECT_GT(w1.relative_bracket, 1e-3) << "nu=" << nu;
    EXPECT_NE(w1.value, 0.0);
    EXPECT_NEAR(w2.value, -2.5 * w1.value, 1e-12 * std::abs(w1.value));
    EXPECT_LT(std::min(w1.value, w2.value), 0.0);
  }
}

TEST(M11Certificate, RejectsSimpleRegime) {
  const auto p = ElasticityParams::from_poisson(0.4, 1.0);
  EXPECT_THROW(m11_gateaux(1, p, first_eigenvalue(p), 1.0), DomainError);
}
