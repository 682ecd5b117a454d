#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "lamespec/disk_spectrum.hpp"
#include "lamespec/elasticity_params.hpp"
#include "lamespec/error.hpp"
#include "lamespec/special_fn.hpp"

namespace lamespec {

/// Fourier coefficients of a normal boundary perturbation
/// phi(theta) = alpha0 + sum_k (alpha_k cos k theta + beta_k sin k theta).
struct FourierPerturbation {
  struct Mode {
    int k = 1;
    double alpha = 0.0;
    double beta = 0.0;
  };

  double alpha0 = 0.0;
  std::vector<Mode> modes;

  void validate() const {
    std::set<int> seen;
    for (const Mode& m : modes) {
      if (m.k < 1) throw DomainError("Fourier mode index must be >= 1");
      if (!seen.insert(m.k).second) throw DomainError("Fourier mode indices must be distinct");
      if (!std::isfinite(m.alpha) || !std::isfinite(m.beta)) throw DomainError("non-finite Fourier coefficient");
    }
  }

  int max_mode() const {
    int k = 0;
    for (const Mode& m : modes) k = std::max(k, m.k);
    return k;
  }

  double evaluate(double theta) const {
    double v = alpha0;
    for (const Mode& m : modes) v += m.alpha * std::cos(m.k * theta) + m.beta * std::sin(m.k * theta);
    return v;
  }

  /// sum over k >= 2 of (k^2 + 1)(alpha_k^2 + beta_k^2).
  double h1_norm_sq_high() const {
    double s = 0.0;
    for (const Mode& m : modes)
      if (m.k >= 2) s += (m.k * static_cast<double>(m.k) + 1.0) * (m.alpha * m.alpha + m.beta * m.beta);
    return s;
  }
};

inline constexpr int kDefaultPerturbationKMax = 60;

/// dLambda(disk)[V] = -2 Lambda alpha0; only the mean of phi contributes.
inline double first_shape_derivative(double eigenvalue, const FourierPerturbation& phi) {
  phi.validate();
  return -2.0 * eigenvalue * phi.alpha0;
}

namespace detail {

inline void require_simple_regime(const ElasticityParams& p) {
  if (!(p.nu() > nu_star() + kRegimeTolerance))
    throw DomainError("disk shape derivatives need nu > nu* (simple first eigenvalue)");
}

struct CkTerms {
  double jk, jkp, wjk, wjkp, w, j;
  double denominator;
};

inline CkTerms ck_terms(int k, const ElasticityParams& p) {
  if (k < 1) throw DomainError("mode index must be >= 1");
  require_simple_regime(p);
  CkTerms t{};
  t.j = j11();
  t.w = p.wave().omega_ratio;
  t.jk = bessel_j(k, t.j);
  t.jkp = bessel_j_deriv(k, t.j);
  t.wjk = bessel_j(k, t.w * t.j);
  t.wjkp = bessel_j_deriv(k, t.w * t.j);
  const double kk = static_cast<double>(k) * k;
  t.denominator = t.j * t.j * t.w * t.wjkp * t.jkp - kk * t.jk * t.wjk;
  const double scale = t.j * t.j * t.w * std::abs(t.wjkp * t.jkp) + kk * std::abs(t.jk * t.wjk);
  if (t.denominator == 0.0 || std::abs(t.denominator) <= 1e-300 + 1e-15 * scale)
    throw NumericalFailure("C_k denominator vanishes for k = " + std::to_string(k));
  return t;
}

}  // namespace detail

/// c_k in d^2 Lambda = mu j11^2 (6 alpha0^2 + sum c_k (alpha_k^2 + beta_k^2)).
inline double c_coefficient(int k, const ElasticityParams& p) {
  const detail::CkTerms t = detail::ck_terms(k, p);
  const double kd = static_cast<double>(k);
  const double num = kd * kd * t.wjk * t.jk - t.w * t.j * t.j * t.jkp * t.wjkp -
                     2.0 * kd * t.w * t.j * t.j * t.jk * t.wjkp;
  return num / t.denominator;
}

/// C_k in d^2 F = pi Lambda sum C_k (alpha_k^2 + beta_k^2), F = |Omega| Lambda.
inline double big_c_coefficient(int k, const ElasticityParams& p) {
  const detail::CkTerms t = detail::ck_terms(k, p);
  const double kd = static_cast<double>(k);
  // The denominator here is minus the one used by c_k.
  return 2.0 * t.j * t.j * t.w * kd * t.wjkp * t.jk / (-t.denominator);
}

/// d^2 Lambda at the disk, mu j11^2 (6 alpha0^2 + sum c_k (alpha_k^2 + beta_k^2)).
inline double second_shape_derivative(const ElasticityParams& p, const FourierPerturbation& phi) {
  phi.validate();
  double s = 6.0 * phi.alpha0 * phi.alpha0;
  auto modes = phi.modes;
  std::sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  for (const auto& m : modes) s += c_coefficient(m.k, p) * (m.alpha * m.alpha + m.beta * m.beta);
  return p.mu() * j11() * j11() * s;
}

/// d^2 F at the disk, summed over modes in ascending k.
inline double second_derivative_F(const ElasticityParams& p, const FourierPerturbation& phi,
                                  int k_max = kDefaultPerturbationKMax) {
  phi.validate();
  if (phi.max_mode() > k_max) throw DomainError("perturbation has modes above k_max");
  detail::require_simple_regime(p);
  const double eigenvalue = p.mu() * j11() * j11();
  auto modes = phi.modes;
  std::sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  double s = 0.0;
  for (const auto& m : modes) {
    if (m.k == 1) continue;  // C_1 = 0: translations leave F unchanged
    s += big_c_coefficient(m.k, p) * (m.alpha * m.alpha + m.beta * m.beta);
  }
  return std::numbers::pi * eigenvalue * s;
}

/// Coercivity constant A0 = min_{2 <= k <= k_max} pi Lambda C_k / (k^2 + 1).
struct Coercivity {
  double a0 = 0.0;
  int argmin_k = 0;
};

inline Coercivity coercivity_constant(const ElasticityParams& p, int k_max = kDefaultPerturbationKMax) {
  if (k_max < 2) throw DomainError("coercivity needs k_max >= 2");
  const double eigenvalue = p.mu() * j11() * j11();
  Coercivity out{std::numeric_limits<double>::infinity(), 0};
  for (int k = 2; k <= k_max; ++k) {
    const double v = std::numbers::pi * eigenvalue * big_c_coefficient(k, p) / (k * static_cast<double>(k) + 1.0);
    if (v < out.a0) out = {v, k};
  }
  return out;
}

/// M_11 for the area-preserving trial V(1, theta) = amplitude cos(2k theta).
struct M11Witness {
  int k = 0;
  double amplitude = 0.0;
  double value = 0.0;            // M_11
  double bracket = 0.0;          // (lambda+2mu) k^2 w1^2 J_k(w1)^2 - mu w2^4 J_k'(w1)^2
  double relative_bracket = 0.0; // |bracket| / (sum of absolute values of its two terms)
};

inline M11Witness m11_gateaux(int k, const ElasticityParams& p, const DiskEigenvalue& eig, double amplitude) {
  if (eig.regime != DiskRegime::TranscendentalDouble || !eig.mode_k || *eig.mode_k != k)
    throw DomainError("M_11 certificate needs the double regime with matching mode k");
  const WaveNumbers wn = wave_numbers(p, eig.value);
  const double w1 = wn.omega1, w2 = wn.omega2;
  const double jk1 = bessel_j(k, w1), djk1 = bessel_j_deriv(k, w1), jk2 = bessel_j(k, w2);
  const double kk = static_cast<double>(k) * k;
  const double t1 = (p.lambda() + 2.0 * p.mu()) * kk * w1 * w1 * jk1 * jk1;
  const double t2 = p.mu() * std::pow(w2, 4) * djk1 * djk1;
  M11Witness out;
  out.k = k;
  out.amplitude = amplitude;
  out.bracket = t1 - t2;
  out.relative_bracket = std::abs(t1 - t2) / (std::abs(t1) + std::abs(t2));
  out.value = w1 * w1 * jk2 * jk2 * (std::numbers::pi * amplitude / 2.0) * out.bracket;
  return out;
}

}  // namespace lamespec
