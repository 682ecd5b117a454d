#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "lamespec/analytic_domains.hpp"
#include "lamespec/elasticity_params.hpp"
#include "lamespec/error.hpp"
#include "lamespec/fem/assembly.hpp"
#include "lamespec/fem/eigensolver.hpp"
#include "lamespec/fem/mesh.hpp"

namespace lamespec::fem {

struct DiskDomain {};
struct EllipseDomain {
  double a = 1.0;
};
struct RectangleDomain {
  double t = 1.0;
};
struct RhombusDomain {
  double area = std::numbers::pi;
};

/// Unit disk, ellipse with semi-axes a and 1/a, rectangle of area pi and aspect t,
/// or the material-dependent rhombus of the given area.
using DomainSpec = std::variant<DiskDomain, EllipseDomain, RectangleDomain, RhombusDomain>;

inline std::string to_string(const DomainSpec& d) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  struct V {
    decltype(num)& f;
    std::string operator()(const DiskDomain&) const { return "disk"; }
    std::string operator()(const EllipseDomain& e) const { return "ellipse:" + f(e.a); }
    std::string operator()(const RectangleDomain& r) const { return "rectangle:" + f(r.t); }
    std::string operator()(const RhombusDomain& r) const { return "rhombus:" + f(r.area); }
  };
  return std::visit(V{num}, d);
}

/// Parse `disk`, `ellipse:a`, `rectangle:t`, `rhombus:area`.
inline DomainSpec parse_domain(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  if (kind == "disk") {
    if (colon != std::string::npos) throw std::invalid_argument("disk takes no parameter");
    return DiskDomain{};
  }
  if (colon == std::string::npos) throw std::invalid_argument("domain '" + s + "' needs a parameter");
  const std::string arg = s.substr(colon + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(arg, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad domain parameter '" + arg + "'");
  }
  if (used != arg.size() || !std::isfinite(v)) throw std::invalid_argument("bad domain parameter '" + arg + "'");
  if (kind == "ellipse") {
    if (!(v > 0.0)) throw std::invalid_argument("ellipse parameter must be positive");
    return EllipseDomain{v};
  }
  if (kind == "rectangle") {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("rectangle aspect must lie in (0, 1]");
    return RectangleDomain{v};
  }
  if (kind == "rhombus") {
    if (!(v > 0.0)) throw std::invalid_argument("rhombus area must be positive");
    return RhombusDomain{v};
  }
  throw std::invalid_argument("unknown domain '" + kind + "'");
}

inline constexpr int kMaxRefinement = 5;

/// Target element size at refinement R, matching the radial spacing of the disk mesh.
inline double refinement_spacing(int refinement) { return 1.0 / (2 << refinement); }

/// Structured mesh of the domain at refinement R (0..5). The disk family uses
/// n_r = max(3, 2^(R+1)) rings and 16 * 2^R sectors on the outer circle.
inline Mesh build_mesh(const DomainSpec& domain, const ElasticityParams& p, int refinement) {
  if (refinement < 0 || refinement > kMaxRefinement) throw DomainError("refinement must lie in 0..5");
  const double h = refinement_spacing(refinement);
  const int n_r = std::max(3, 2 << refinement);
  const int n_t = 16 << refinement;
  auto cells = [h](double len) { return std::max(2, static_cast<int>(std::ceil(len / h - 1e-9))); };
  if (std::holds_alternative<DiskDomain>(domain)) return mesh_ellipse(1.0, n_r, n_t);
  if (const auto* e = std::get_if<EllipseDomain>(&domain)) return mesh_ellipse(e->a, n_r, n_t);
  if (const auto* r = std::get_if<RectangleDomain>(&domain)) {
    const RectangleSpec spec = make_rectangle_spec(r->t);
    return mesh_rectangle(spec.L, spec.ell, cells(spec.L), cells(spec.ell));
  }
  const auto& rd = std::get<RhombusDomain>(domain);
  const Rhombus rh = build_rhombus(p, rd.area);
  const Vec2 A = rh.vertices[0], B = rh.vertices[1], D = rh.vertices[3];
  const int n = cells(std::max((B - A).norm(), (D - A).norm()));
  Eigen::Matrix2d J;
  J.col(0) = B - A;
  J.col(1) = D - A;
  return mesh_affine_map(mesh_rectangle(1.0, 1.0, n, n), J, A);
}

/// FEM estimate of the first Lame eigenvalue.
struct FemEigenvalue {
  double value = 0.0;  // smallest eigenvalue
  double gap = 0.0;    // (value_2 - value_1) / value_1
  Eigen::VectorXd values;
  Eigen::VectorXd residuals;
  double mesh_area = 0.0;
  std::size_t dofs = 0;
  int refinement = 0;
  int iterations = 0;
  bool multiple() const { return gap < kMultiplicityGap; }
};

inline constexpr int kFemModes = 3;

inline FemEigenvalue lame_eigenvalue_fem(const DomainSpec& domain, const ElasticityParams& p, int refinement,
                                         const SolverOptions& opt = {}, int modes = kFemModes) {
  const Mesh mesh = build_mesh(domain, p, refinement);
  const SymmetricSparsePencil pencil = assemble_lame(mesh, p);
  const EigenResult r = solve_smallest(pencil, modes, opt);
  FemEigenvalue out;
  out.values = r.values;
  out.residuals = r.residuals;
  out.value = r.values[0];
  out.gap = r.gap();
  out.mesh_area = mesh.area();
  out.dofs = pencil.dof_count();
  out.refinement = refinement;
  out.iterations = r.iterations;
  return out;
}

}  // namespace lamespec::fem
