#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lamespec/disk_spectrum.hpp"
#include "lamespec/elasticity_params.hpp"
#include "lamespec/error.hpp"
#include "lamespec/special_fn.hpp"

namespace lamespec {

// ---------------------------------------------------------------- rhombi

/// Rhombus on which (u, u) is an eigenfunction. Sides lie on the lines
/// e1.X = xi1, xi1_hat and e2.X = xi2, xi2_hat.
struct Rhombus {
  std::array<Eigen::Vector2d, 4> vertices;  // counterclockwise
  Eigen::Vector2d e1;
  Eigen::Vector2d e2;
  std::array<double, 4> xi{};  // xi1, xi1_hat, xi2, xi2_hat
  double area = 0.0;
  std::array<double, 2> theta{0.0, 0.0};
  double eigenvalue = 0.0;
};

/// Lambda = 2 pi^2 sqrt(mu (lambda + 2 mu)) / area.
inline double rhombus_eigenvalue(const ElasticityParams& p, double area) {
  if (!(area > 0.0) || !std::isfinite(area)) throw DomainError("area must be positive");
  const double pi = std::numbers::pi;
  return 2.0 * pi * pi * std::sqrt(p.mu() * (p.lambda() + 2.0 * p.mu())) / area;
}

inline double shoelace_area(const std::array<Eigen::Vector2d, 4>& v) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % 4];
    s += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * s;
}

inline Rhombus build_rhombus(const ElasticityParams& p, double area) {
  Rhombus rh;
  rh.eigenvalue = rhombus_eigenvalue(p, area);
  const WaveScalings w = p.wave();
  const double alpha = w.a1 - w.a2;
  const double beta = w.a1 + w.a2;
  if (std::abs(alpha) < 1e-14) throw DomainError("degenerate rhombus normals");
  rh.e1 = {alpha, beta};
  rh.e2 = {beta, alpha};
  const double pi = std::numbers::pi;
  const double s = std::sqrt(2.0 / rh.eigenvalue);
  // Phases zero: sin(.) vanishes at e1.X = 2 m pi s, cos(.) at e2.X = (2m+1) pi s.
  rh.xi = {0.0, 2.0 * pi * s, pi * s, 3.0 * pi * s};

  Eigen::Matrix2d n;
  n.row(0) = rh.e1.transpose();
  n.row(1) = rh.e2.transpose();
  const Eigen::Matrix2d ninv = n.inverse();
  auto corner = [&](double c1, double c2) -> Eigen::Vector2d { return ninv * Eigen::Vector2d(c1, c2); };
  // Anchor: xi1 line meets xi2_hat line.
  std::array<Eigen::Vector2d, 4> v = {corner(rh.xi[0], rh.xi[3]), corner(rh.xi[0], rh.xi[2]),
                                      corner(rh.xi[1], rh.xi[2]), corner(rh.xi[1], rh.xi[3])};
  if (shoelace_area(v) < 0.0) std::swap(v[1], v[3]);
  rh.vertices = v;
  rh.area = shoelace_area(v);
  return rh;
}

inline bool rhombus_contains(const Rhombus& rh, const Eigen::Vector2d& pt, double rel_tol = 1e-12) {
  const double c1 = rh.e1.dot(pt), c2 = rh.e2.dot(pt);
  const double tol1 = rel_tol * (std::abs(rh.xi[1]) + 1.0);
  const double tol2 = rel_tol * (std::abs(rh.xi[3]) + 1.0);
  return c1 >= rh.xi[0] - tol1 && c1 <= rh.xi[1] + tol1 && c2 >= rh.xi[2] - tol2 && c2 <= rh.xi[3] + tol2;
}

/// Scalar u with U = (u, u): u = sin(w1 (x + y) - theta1) - sin(w2 (x - y) - theta2).
inline double rhombus_eigenfunction_scalar(const ElasticityParams& p, const Rhombus& rh, const Eigen::Vector2d& pt) {
  const double w1 = std::sqrt(rh.eigenvalue / (2.0 * p.lambda() + 4.0 * p.mu()));
  const double w2 = std::sqrt(rh.eigenvalue / (2.0 * p.mu()));
  const double x = pt.x(), y = pt.y();
  return std::sin(w1 * (x + y) - rh.theta[0]) - std::sin(w2 * (x - y) - rh.theta[1]);
}

inline Eigen::Vector2d rhombus_eigenfunction(const ElasticityParams& p, const Rhombus& rh, const Eigen::Vector2d& pt) {
  if (!rhombus_contains(rh, pt)) throw DomainError("point lies outside the rhombus");
  const double u = rhombus_eigenfunction_scalar(p, rh, pt);
  return {u, u};
}

/// Field (u, u) without the containment check, for finite-difference stencils.
inline VectorField2D rhombus_field(const ElasticityParams& p, const Rhombus& rh) {
  return {[p, rh](double x, double y) -> Eigen::Vector2d {
    const double u = rhombus_eigenfunction_scalar(p, rh, {x, y});
    return {u, u};
  }};
}

/// Poisson ratio below which the rhombus of area pi beats the disk:
/// (j11^4 - 8 pi^2) / (2 (j11^4 - 4 pi^2)).
inline double rhombus_disk_threshold() {
  const double j4 = std::pow(j11(), 4);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return (j4 - 8.0 * pi2) / (2.0 * (j4 - 4.0 * pi2));
}

// ---------------------------------------------------------------- rectangles

/// Rectangle (0, L) x (0, ell) of area pi with ell / L = t.
struct RectangleSpec {
  double t = 1.0;
  double L = 0.0;
  double ell = 0.0;
};

inline RectangleSpec make_rectangle_spec(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("rectangle aspect t must lie in (0, 1]");
  const double pi = std::numbers::pi;
  return {t, std::sqrt(pi / t), std::sqrt(t * pi)};
}

/// Coefficient of alpha1 beta2 + alpha2 beta1 in the divergence part of Q, per unit a.
inline constexpr double kQFormCrossTerm = -128.0 / (9.0 * std::numbers::pi);
/// Matching off-diagonal entry of the symmetric matrix, per unit a.
inline constexpr double kQMatrixOffDiagonal = -64.0 / (9.0 * std::numbers::pi);

struct RectangleCoefficients {
  double a1, a2, a3, a4, b;
};

inline RectangleCoefficients rectangle_coefficients(double a_ratio, double t) {
  if (!(a_ratio > 0.0)) throw DomainError("ratio a must be positive");
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("rectangle aspect t must lie in (0, 1]");
  const double pi = std::numbers::pi;
  const double a = a_ratio;
  return {pi * (1.0 + a) * t + pi / t, 4.0 * pi * (1.0 + a) * t + 4.0 * pi / t, pi * t + (1.0 + a) * pi / t,
          4.0 * pi * t + 4.0 * (1.0 + a) * pi / t, kQMatrixOffDiagonal * a};
}

/// Matrix of the Rayleigh quotient (divided by mu) on span{phi1, phi2} x span{phi1, phi2},
/// unknowns ordered (alpha1, alpha2, beta1, beta2).
inline Eigen::Matrix4d rectangle_qform(double a_ratio, const RectangleSpec& spec) {
  const RectangleCoefficients c = rectangle_coefficients(a_ratio, spec.t);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = c.a1;
  m(1, 1) = c.a2;
  m(2, 2) = c.a3;
  m(3, 3) = c.a4;
  m(0, 3) = m(3, 0) = c.b;
  m(1, 2) = m(2, 1) = c.b;
  return m;
}

/// q1(a, t, x) = (a1 - x)(a4 - x) - b^2.
inline double rectangle_q1(double a_ratio, double t, double x) {
  const RectangleCoefficients c = rectangle_coefficients(a_ratio, t);
  return (c.a1 - x) * (c.a4 - x) - c.b * c.b;
}

/// q2(a, t, x) = (a2 - x)(a3 - x) - b^2.
inline double rectangle_q2(double a_ratio, double t, double x) {
  const RectangleCoefficients c = rectangle_coefficients(a_ratio, t);
  return (c.a2 - x) * (c.a3 - x) - c.b * c.b;
}

inline double smaller_root(double p, double q, double b) {
  // Smaller root of (p - x)(q - x) - b^2.
  return 0.5 * ((p + q) - std::sqrt((p - q) * (p - q) + 4.0 * b * b));
}

/// mu times the smaller root of q1: an upper bound on Lambda of the rectangle.
inline double rectangle_upper_bound(const ElasticityParams& p, const RectangleSpec& spec) {
  const RectangleCoefficients c = rectangle_coefficients(p.a_ratio(), spec.t);
  return p.mu() * smaller_root(c.a1, c.a4, c.b);
}

struct RectangleVerdict {
  bool beats = false;
  std::optional<double> witness_t;
  double best_bound = 0.0;
  double best_t = 0.0;
};

inline std::vector<double> rectangle_t_grid() {
  std::vector<double> grid;
  for (int i = 30; i <= 100; ++i) grid.push_back(i / 100.0);
  grid.push_back(2.0 / 5.0);
  return grid;
}

inline RectangleVerdict rectangle_beats_disk(const ElasticityParams& p) {
  const double disk = p.mu() * j11() * j11();
  RectangleVerdict out;
  out.best_bound = std::numeric_limits<double>::infinity();
  for (double t : rectangle_t_grid()) {
    const double b = rectangle_upper_bound(p, make_rectangle_spec(t));
    if (b < out.best_bound) {
      out.best_bound = b;
      out.best_t = t;
    }
  }
  if (out.best_bound < disk * (1.0 - 1e-12)) {
    out.beats = true;
    out.witness_t = out.best_t;
  }
  return out;
}

// ---------------------------------------------------------------- cuboids

/// Dirichlet Laplacian eigenvalue of (0, L) x (0, 1)^{N-1}.
inline double cuboid_dirichlet(double L, int N) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return pi2 * (N - 1 + 1.0 / (L * L));
}

inline double cuboid_upper_bound(const ElasticityParams& p, double L, int N) {
  if (!(L >= 1.0)) throw DomainError("cuboid length must be >= 1");
  if (N < 2) throw DomainError("cuboid dimension must be >= 2");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return p.mu() * cuboid_dirichlet(L, N) + (p.lambda() + p.mu()) * pi2 / (L * L);
}

}  // namespace lamespec
