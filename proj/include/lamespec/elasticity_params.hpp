#pragma once

#include <cmath>
#include <string>

#include "lamespec/error.hpp"

namespace lamespec {

/// Wave-speed reciprocals a1 = 1/sqrt(lambda + 2 mu), a2 = 1/sqrt(mu), and their ratio.
struct WaveScalings {
  double a1 = 0.0;
  double a2 = 0.0;
  double omega_ratio = 0.0;  // a1 / a2 = sqrt(mu / (lambda + 2 mu))
};

/// omega = sqrt(Lambda), omega1 = a1 omega, omega2 = a2 omega.
struct WaveNumbers {
  double omega = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
};

/// Isotropic material in the Lame parameterisation, with mu > 0 and lambda + mu > 0.
class ElasticityParams {
 public:
  static ElasticityParams from_lame(double lambda, double mu) {
    check(lambda, mu);
    return ElasticityParams(lambda, mu, lambda / (2.0 * (lambda + mu)));
  }

  /// nu in (-1, 1/2).
  static ElasticityParams from_poisson(double nu, double mu) {
    if (!std::isfinite(nu) || !(nu > -1.0 && nu < 0.5))
      throw AdmissibilityError("Poisson ratio must lie in (-1, 1/2)");
    if (!std::isfinite(mu) || !(mu > 0.0)) throw AdmissibilityError("mu must be positive");
    const double lambda = 2.0 * nu * mu / (1.0 - 2.0 * nu);
    check(lambda, mu);
    return ElasticityParams(lambda, mu, nu);
  }

  static ElasticityParams from_young(double young, double nu) {
    if (!std::isfinite(young) || !(young > 0.0)) throw AdmissibilityError("Young's modulus must be positive");
    if (!std::isfinite(nu) || !(nu > -1.0 && nu < 0.5))
      throw AdmissibilityError("Poisson ratio must lie in (-1, 1/2)");
    const double lambda = young * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double mu = young / (2.0 * (1.0 + nu));
    check(lambda, mu);
    return ElasticityParams(lambda, mu, nu);
  }

  /// Parameters with mu fixed and (lambda + mu) / mu = a.
  static ElasticityParams from_ratio(double a, double mu) {
    if (!std::isfinite(a) || !(a > 0.0)) throw AdmissibilityError("ratio (lambda + mu) / mu must be positive");
    return from_lame((a - 1.0) * mu, mu);
  }

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double nu() const { return nu_; }
  double young() const { return 2.0 * mu_ * (1.0 + nu_); }
  /// a = (lambda + mu) / mu, equal to 1 / (1 - 2 nu).
  double a_ratio() const { return (lambda_ + mu_) / mu_; }

  WaveScalings wave() const {
    WaveScalings w;
    w.a1 = 1.0 / std::sqrt(lambda_ + 2.0 * mu_);
    w.a2 = 1.0 / std::sqrt(mu_);
    w.omega_ratio = std::sqrt(mu_ / (lambda_ + 2.0 * mu_));
    return w;
  }

 private:
  ElasticityParams(double lambda, double mu, double nu) : lambda_(lambda), mu_(mu), nu_(nu) {}

  static void check(double lambda, double mu) {
    if (!std::isfinite(lambda) || !std::isfinite(mu)) throw AdmissibilityError("non-finite Lame parameter");
    if (!(mu > 0.0)) throw AdmissibilityError("mu must be positive");
    if (!(lambda + mu > 0.0)) throw AdmissibilityError("lambda + mu must be positive");
  }

  double lambda_;
  double mu_;
  double nu_;
};

inline WaveScalings wave_scalings(const ElasticityParams& p) { return p.wave(); }

inline WaveNumbers wave_numbers(const ElasticityParams& p, double eigenvalue) {
  if (!(eigenvalue > 0.0)) throw DomainError("eigenvalue must be positive");
  const WaveScalings w = p.wave();
  const double omega = std::sqrt(eigenvalue);
  return {omega, w.a1 * omega, w.a2 * omega};
}

}  // namespace lamespec
