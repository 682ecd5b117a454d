#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "lamespec/elasticity_params.hpp"
#include "lamespec/error.hpp"
#include "lamespec/special_fn.hpp"

namespace lamespec {

enum class DiskRegime { SimpleBranch, TranscendentalDouble, TripleAtThreshold };

inline std::string to_string(DiskRegime r) {
  switch (r) {
    case DiskRegime::SimpleBranch: return "simple";
    case DiskRegime::TranscendentalDouble: return "double";
    case DiskRegime::TripleAtThreshold: return "triple";
  }
  return "unknown";
}

/// First Dirichlet eigenvalue of the unit disk. mode_k and omega_root are set
/// whenever the transcendental branch attains the minimum.
struct DiskEigenvalue {
  double value = 0.0;
  DiskRegime regime = DiskRegime::SimpleBranch;
  std::optional<int> mode_k;
  std::optional<double> omega_root;
};

/// Plane vector field u(x, y).
struct VectorField2D {
  std::function<Eigen::Vector2d(double, double)> eval;
  Eigen::Vector2d operator()(double x, double y) const { return eval(x, y); }
  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const { return eval(p.x(), p.y()); }
};

/// Which of the two independent eigenfunctions of a double eigenvalue to build.
enum class DiskBranch { Primary, Secondary };

inline constexpr double kRegimeTolerance = 1e-9;
inline constexpr double kOmegaScanStart = 1e-6;
inline constexpr double kOmegaScanStep = 1e-3;
inline constexpr double kOmegaRootTolerance = 1e-12;
inline constexpr int kDefaultKMax = 20;

/// nu* = (j11^2 - 2 j'11^2) / (2 j11^2 - 2 j'11^2).
inline double nu_star() {
  const double j2 = j11() * j11();
  const double jp2 = jp11() * jp11();
  return (j2 - 2.0 * jp2) / (2.0 * j2 - 2.0 * jp2);
}

namespace detail {
inline void check_transcendental_args(int k, double omega) {
  if (k < 1) throw DomainError("transcendental function needs k >= 1");
  if (!std::isfinite(omega) || !(omega > 0.0)) throw DomainError("omega must be positive");
}
}  // namespace detail

/// F_k(omega) with x1 = a1 omega, x2 = a2 omega. Evaluated through the
/// equivalent form (k/x1) J_k(x1) J_{k+1}(x2) + (k/x2) J_{k+1}(x1) J_k(x2)
/// - J_{k+1}(x1) J_{k+1}(x2), which has no leading-order cancellation as omega -> 0.
inline double transcendental_f(int k, double omega, const ElasticityParams& p) {
  detail::check_transcendental_args(k, omega);
  const WaveScalings w = p.wave();
  const double x1 = w.a1 * omega, x2 = w.a2 * omega;
  const double P = bessel_j(k, x1), Q = bessel_j(k, x2);
  const double Pn = bessel_j(k + 1, x1), Qn = bessel_j(k + 1, x2);
  return (k / x1) * P * Qn + (k / x2) * Pn * Q - Pn * Qn;
}

/// F_k(omega) written with J_{k-1}, term for term. Same function as
/// transcendental_f; loses relative accuracy when omega is small and k large.
inline double transcendental_f_lower_form(int k, double omega, const ElasticityParams& p) {
  detail::check_transcendental_args(k, omega);
  const WaveScalings w = p.wave();
  const double x1 = w.a1 * omega, x2 = w.a2 * omega;
  const double P = bessel_j(k, x1), Q = bessel_j(k, x2);
  const double Pm = bessel_j(k - 1, x1), Qm = bessel_j(k - 1, x2);
  return (k / x1) * P * Qm + (k / x2) * Pm * Q - Pm * Qm;
}

/// Boundary determinant x1 x2 J_k'(x1) J_k'(x2) - k^2 J_k(x1) J_k(x2) = -x1 x2 F_k.
inline double transcendental_determinant(int k, double omega, const ElasticityParams& p) {
  detail::check_transcendental_args(k, omega);
  const WaveScalings w = p.wave();
  const double x1 = w.a1 * omega, x2 = w.a2 * omega;
  return x1 * x2 * bessel_j_deriv(k, x1) * bessel_j_deriv(k, x2) -
         static_cast<double>(k) * k * bessel_j(k, x1) * bessel_j(k, x2);
}

/// Smallest root of F_k in (0, sqrt(mu) j11], or nullopt when F_k keeps its sign.
/// The scan runs in the scale-free variable s = a2 omega.
inline std::optional<double> first_transcendental_root(int k, const ElasticityParams& p) {
  const double a2 = p.wave().a2;
  const double s_end = j11();
  auto f = [&](double omega) { return transcendental_f(k, omega, p); };
  // F_k is positive near 0; exact zeros from underflow carry no sign information.
  double prev_omega = kOmegaScanStart / a2;
  double prev = f(prev_omega);
  bool prev_neg = prev < 0.0;
  if (prev_neg) return prev_omega;
  const auto steps = static_cast<long>(std::ceil((s_end - kOmegaScanStart) / kOmegaScanStep));
  for (long i = 1; i <= steps; ++i) {
    const double s = std::min(s_end, kOmegaScanStart + i * kOmegaScanStep);
    const double omega = s / a2;
    const double val = f(omega);
    if (val < 0.0) {
      return find_root_bracketed(f, prev_omega, omega, kOmegaRootTolerance).value;
    }
    if (val > 0.0) prev_omega = omega;
  }
  return std::nullopt;
}

/// First Dirichlet eigenvalue of the unit disk for the given material.
inline DiskEigenvalue first_eigenvalue(const ElasticityParams& p, int k_max = kDefaultKMax) {
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  const double simple = p.mu() * j11() * j11();
  const double nu = p.nu();
  const double ns = nu_star();
  if (nu > ns + kRegimeTolerance) return {simple, DiskRegime::SimpleBranch, std::nullopt, std::nullopt};
  if (std::abs(nu - ns) <= kRegimeTolerance)
    return {simple, DiskRegime::TripleAtThreshold, 1, std::sqrt(p.mu()) * j11()};

  std::optional<double> best;
  int best_k = 0;
  for (int k = 1; k <= k_max; ++k) {
    const auto root = first_transcendental_root(k, p);
    if (root && (!best || *root < *best)) {
      best = root;
      best_k = k;
    }
  }
  if (!best) throw NumericalFailure("no transcendental root below sqrt(mu) j11 although nu < nu*");
  return {(*best) * (*best), DiskRegime::TranscendentalDouble, best_k, *best};
}

namespace detail {

// Field from potentials given through radial/angular profiles, returned in Cartesian form.
inline Eigen::Vector2d polar_to_cartesian(double ur, double ut, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * ur - s * ut, s * ur + c * ut};
}

}  // namespace detail

/// Eigenfunction of the unit disk for the eigenvalue `eig`. The simple branch is
/// u = alpha J_1(j11 r)(-sin theta, cos theta), normalised in L^2. The double
/// branch is grad psi1 + curl psi2 built from the mode-k potentials.
inline VectorField2D eigenfunction(const ElasticityParams& p, const DiskEigenvalue& eig,
                                   DiskBranch branch = DiskBranch::Primary) {
  if (eig.regime != DiskRegime::TranscendentalDouble) {
    if (branch != DiskBranch::Primary)
      throw DomainError("the divergence-free branch has a single eigenfunction");
    const double j = j11();
    const double alpha = 1.0 / (std::sqrt(std::numbers::pi) * std::abs(bessel_j(0, j)));
    return {[alpha, j](double x, double y) -> Eigen::Vector2d {
      const double r = std::hypot(x, y);
      // J_1(j r) / r keeps the field smooth through the origin.
      const double g = alpha * j * bessel_j_over_x(1, j * r);
      return {-g * y, g * x};
    }};
  }
  if (!eig.mode_k || !eig.omega_root) throw DomainError("double-branch eigenvalue without mode data");
  const int k = *eig.mode_k;
  const WaveNumbers wn = wave_numbers(p, eig.value);
  const double w1 = wn.omega1, w2 = wn.omega2;
  const double kd = static_cast<double>(k);
  const double c1 = kd * bessel_j(k, w2);
  const double c2 = w1 * bessel_j_deriv(k, w1);
  const bool primary = branch == DiskBranch::Primary;
  return {[=](double x, double y) -> Eigen::Vector2d {
    const double r = std::hypot(x, y);
    const double theta = std::atan2(y, x);
    const double d1 = w1 * bessel_j_deriv(k, w1 * r);
    const double d2 = w2 * bessel_j_deriv(k, w2 * r);
    const double q1 = w1 * bessel_j_over_x(k, w1 * r);  // J_k(w1 r) / r
    const double q2 = w2 * bessel_j_over_x(k, w2 * r);
    const double ck = std::cos(kd * theta), sk = std::sin(kd * theta);
    if (primary) {
      // psi1 = c1 J_k(w1 r) cos k theta, psi2 = -c2 J_k(w2 r) sin k theta
      const double ur = (c1 * d1 - c2 * kd * q2) * ck;
      const double ut = (-c1 * kd * q1 + c2 * d2) * sk;
      return detail::polar_to_cartesian(ur, ut, theta);
    }
    // psi1 = c1 J_k(w1 r) sin k theta, psi2 = c2 J_k(w2 r) cos k theta
    const double ur = (c1 * d1 - c2 * kd * q2) * sk;
    const double ut = (c1 * kd * q1 - c2 * d2) * ck;
    return detail::polar_to_cartesian(ur, ut, theta);
  }};
}

inline constexpr double kResidualStep = 1e-4;

/// mu Laplace(u) + (lambda + mu) grad div u + Lambda u at a point, by nested
/// central differences with step h. No domain check.
inline Eigen::Vector2d lame_operator_residual(const VectorField2D& u, const ElasticityParams& p,
                                              double eigenvalue, const Eigen::Vector2d& pt,
                                              double h = kResidualStep) {
  const double x = pt.x(), y = pt.y();
  const Eigen::Vector2d c = u(x, y);
  const Eigen::Vector2d uxp = u(x + h, y), uxm = u(x - h, y);
  const Eigen::Vector2d uyp = u(x, y + h), uym = u(x, y - h);
  const Eigen::Vector2d upp = u(x + h, y + h), upm = u(x + h, y - h);
  const Eigen::Vector2d ump = u(x - h, y + h), umm = u(x - h, y - h);
  const double h2 = h * h;
  const Eigen::Vector2d uxx = (uxp - 2.0 * c + uxm) / h2;
  const Eigen::Vector2d uyy = (uyp - 2.0 * c + uym) / h2;
  const Eigen::Vector2d uxy = (upp - upm - ump + umm) / (4.0 * h2);
  const Eigen::Vector2d lap = uxx + uyy;
  const Eigen::Vector2d grad_div(uxx.x() + uxy.y(), uxy.x() + uyy.y());
  return p.mu() * lap + (p.lambda() + p.mu()) * grad_div + eigenvalue * c;
}

/// Residual of the Lame eigen-equation at an interior point of the unit disk.
inline Eigen::Vector2d pde_residual(const VectorField2D& u, const ElasticityParams& p, double eigenvalue,
                                    const Eigen::Vector2d& pt, double h = kResidualStep) {
  if (pt.norm() + 2.0 * h >= 1.0) throw DomainError("residual point must lie inside the unit disk");
  return lame_operator_residual(u, p, eigenvalue, pt, h);
}

}  // namespace lamespec
