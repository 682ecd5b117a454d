#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lamespec/elasticity_params.hpp"
#include "lamespec/fem/mesh.hpp"
#include "lamespec/fem/p2.hpp"

namespace lamespec::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Stiffness/mass pair restricted to the free (non-Dirichlet) degrees of freedom.
/// Unknown i carries component dof_component[i] at P2 node dof_node[i].
struct SymmetricSparsePencil {
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::vector<int> dof_node;
  std::vector<int> dof_component;
  int components = 1;
  std::size_t dof_count() const { return dof_node.size(); }
};

/// Parameter-free pieces of the Lame form: A = mu * grad + (lambda + mu) * div.
struct LameParts {
  SparseMatrix grad;  // sum_c int grad u_c . grad v_c
  SparseMatrix div;   // int div u div v
  SparseMatrix mass;  // int u . v
  std::vector<int> dof_node;
  std::vector<int> dof_component;
};

namespace detail {

struct RefTables {
  std::array<std::array<double, 6>, 6> phi;              // [q][i]
  std::array<std::array<Eigen::Vector2d, 6>, 6> dphi;    // [q][i], reference gradients
};

inline const RefTables& ref_tables() {
  static const RefTables t = [] {
    RefTables r;
    const Quadrature6& q = quadrature6();
    for (int k = 0; k < 6; ++k) {
      r.phi[k] = p2_values(q.points[k][0], q.points[k][1]);
      r.dphi[k] = p2_ref_gradients(q.points[k][0], q.points[k][1]);
    }
    return r;
  }();
  return t;
}

struct LocalMatrices {
  Eigen::Matrix<double, 6, 6> lap;          // int grad phi_i . grad phi_j
  Eigen::Matrix<double, 6, 6> dd[2][2];     // int d_c phi_i d_d phi_j
  Eigen::Matrix<double, 6, 6> mass;
};

inline LocalMatrices local_matrices(const Mesh& m, std::size_t t, bool with_div) {
  const ElementGeometry g = element_geometry(m, t);
  const RefTables& ref = ref_tables();
  const Quadrature6& quad = quadrature6();
  LocalMatrices L;
  L.lap.setZero();
  L.mass.setZero();
  for (auto& row : L.dd)
    for (auto& mat : row) mat.setZero();
  for (int q = 0; q < 6; ++q) {
    const double w = quad.weights[q] * g.area;
    Eigen::Matrix<double, 2, 6> G;
    for (int i = 0; i < 6; ++i) G.col(i) = g.inv_t * ref.dphi[q][i];
    Eigen::Map<const Eigen::Matrix<double, 6, 1>> phi(ref.phi[q].data());
    L.lap.noalias() += w * (G.transpose() * G);
    L.mass.noalias() += w * (phi * phi.transpose());
    if (with_div)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) L.dd[c][d].noalias() += w * (G.row(c).transpose() * G.row(d));
  }
  return L;
}

}  // namespace detail

inline LameParts assemble_lame_parts(const Mesh& mesh) {
  const P2Space space(mesh);
  const std::size_t n = 2 * space.num_free();
  std::vector<Eigen::Triplet<double>> tg, td, tm;
  tg.reserve(mesh.num_triangles() * 72);
  td.reserve(mesh.num_triangles() * 144);
  tm.reserve(mesh.num_triangles() * 72);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const detail::LocalMatrices L = detail::local_matrices(mesh, t, true);
    const auto nodes = space.element_nodes(t);
    for (int i = 0; i < 6; ++i) {
      const int fi = space.free_index(nodes[i]);
      if (fi < 0) continue;
      for (int j = 0; j < 6; ++j) {
        const int fj = space.free_index(nodes[j]);
        if (fj < 0) continue;
        for (int c = 0; c < 2; ++c) {
          tg.emplace_back(2 * fi + c, 2 * fj + c, L.lap(i, j));
          tm.emplace_back(2 * fi + c, 2 * fj + c, L.mass(i, j));
          for (int d = 0; d < 2; ++d) td.emplace_back(2 * fi + c, 2 * fj + d, L.dd[c][d](i, j));
        }
      }
    }
  }
  LameParts parts;
  parts.grad.resize(n, n);
  parts.div.resize(n, n);
  parts.mass.resize(n, n);
  parts.grad.setFromTriplets(tg.begin(), tg.end());
  parts.div.setFromTriplets(td.begin(), td.end());
  parts.mass.setFromTriplets(tm.begin(), tm.end());
  parts.dof_node.resize(n);
  parts.dof_component.resize(n);
  for (std::size_t f = 0; f < space.num_free(); ++f)
    for (int c = 0; c < 2; ++c) {
      parts.dof_node[2 * f + c] = space.free_nodes()[f];
      parts.dof_component[2 * f + c] = c;
    }
  return parts;
}

inline SymmetricSparsePencil lame_pencil(const LameParts& parts, const ElasticityParams& p) {
  SymmetricSparsePencil out;
  out.stiffness = p.mu() * parts.grad + (p.lambda() + p.mu()) * parts.div;
  out.mass = parts.mass;
  out.dof_node = parts.dof_node;
  out.dof_component = parts.dof_component;
  out.components = 2;
  return out;
}

/// P2 discretisation of mu int |grad u|^2 + (lambda + mu) int (div u)^2 over int |u|^2.
inline SymmetricSparsePencil assemble_lame(const Mesh& mesh, const ElasticityParams& p) {
  return lame_pencil(assemble_lame_parts(mesh), p);
}

/// Scalar P2 Dirichlet Laplacian.
inline SymmetricSparsePencil assemble_scalar_laplace(const Mesh& mesh) {
  const P2Space space(mesh);
  const std::size_t n = space.num_free();
  std::vector<Eigen::Triplet<double>> ts, tm;
  ts.reserve(mesh.num_triangles() * 36);
  tm.reserve(mesh.num_triangles() * 36);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const detail::LocalMatrices L = detail::local_matrices(mesh, t, false);
    const auto nodes = space.element_nodes(t);
    for (int i = 0; i < 6; ++i) {
      const int fi = space.free_index(nodes[i]);
      if (fi < 0) continue;
      for (int j = 0; j < 6; ++j) {
        const int fj = space.free_index(nodes[j]);
        if (fj < 0) continue;
        ts.emplace_back(fi, fj, L.lap(i, j));
        tm.emplace_back(fi, fj, L.mass(i, j));
      }
    }
  }
  SymmetricSparsePencil out;
  out.stiffness.resize(n, n);
  out.mass.resize(n, n);
  out.stiffness.setFromTriplets(ts.begin(), ts.end());
  out.mass.setFromTriplets(tm.begin(), tm.end());
  out.dof_node = space.free_nodes();
  out.dof_component.assign(n, 0);
  out.components = 1;
  return out;
}

/// Integrals of a P2 vector field given by nodal values u[2 * node + c].
struct FieldEnergies {
  double grad_sq = 0.0;      // int |grad u|^2
  double div_sq = 0.0;       // int (div u)^2
  double sym_grad_sq = 0.0;  // int |e(u)|^2, e(u) = (grad u + grad u^T) / 2
  double l2_sq = 0.0;        // int |u|^2
};

inline FieldEnergies field_energies(const P2Space& space, const Eigen::VectorXd& nodal) {
  const Mesh& mesh = space.mesh();
  if (static_cast<std::size_t>(nodal.size()) != 2 * space.num_nodes()) throw DomainError("nodal vector has wrong size");
  const detail::RefTables& ref = detail::ref_tables();
  const Quadrature6& quad = quadrature6();
  FieldEnergies e;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto nodes = space.element_nodes(t);
    for (int q = 0; q < 6; ++q) {
      const double w = quad.weights[q] * g.area;
      Eigen::Matrix2d du = Eigen::Matrix2d::Zero();  // du(c, d) = d_d u_c
      Eigen::Vector2d u = Eigen::Vector2d::Zero();
      for (int i = 0; i < 6; ++i) {
        const Eigen::Vector2d gi = g.inv_t * ref.dphi[q][i];
        const Eigen::Vector2d ui(nodal[2 * nodes[i]], nodal[2 * nodes[i] + 1]);
        du += ui * gi.transpose();
        u += ref.phi[q][i] * ui;
      }
      const Eigen::Matrix2d sym = 0.5 * (du + du.transpose());
      const double div = du.trace();
      e.grad_sq += w * du.squaredNorm();
      e.div_sq += w * div * div;
      e.sym_grad_sq += w * sym.squaredNorm();
      e.l2_sq += w * u.squaredNorm();
    }
  }
  return e;
}

/// Scatter a vector over free unknowns into nodal values (zero on Dirichlet nodes).
inline Eigen::VectorXd expand_to_nodes(const P2Space& space, const SymmetricSparsePencil& pencil, const Eigen::VectorXd& x) {
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pencil.components * space.num_nodes()));
  for (std::size_t i = 0; i < pencil.dof_count(); ++i)
    nodal[pencil.components * pencil.dof_node[i] + pencil.dof_component[i]] = x[static_cast<Eigen::Index>(i)];
  return nodal;
}

}  // namespace lamespec::fem
