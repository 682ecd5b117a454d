#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "lamespec/fem/mesh.hpp"

namespace lamespec::fem {

/// Six-point rule on the reference triangle, exact for polynomials of degree 4.
/// Weights sum to 1 (multiply by the triangle area).
struct Quadrature6 {
  static constexpr int size = 6;
  std::array<std::array<double, 2>, 6> points;
  std::array<double, 6> weights;
};

inline const Quadrature6& quadrature6() {
  static const Quadrature6 q = [] {
    const double a = 0.445948490915965, wa = 0.223381589678011;
    const double b = 0.091576213509771, wb = 0.109951743655322;
    Quadrature6 r;
    r.points = {{{a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a}, {b, b}, {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}}};
    r.weights = {wa, wa, wa, wb, wb, wb};
    return r;
  }();
  return q;
}

/// Reference P2 basis on (xi, eta): vertices 0..2, then midpoints of edges
/// (0,1), (1,2), (2,0). Barycentrics l0 = 1 - xi - eta, l1 = xi, l2 = eta.
inline std::array<double, 6> p2_values(double xi, double eta) {
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  return {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0), 4.0 * l0 * l1, 4.0 * l1 * l2, 4.0 * l2 * l0};
}

/// Reference gradients d/dxi, d/deta of the six basis functions.
inline std::array<Eigen::Vector2d, 6> p2_ref_gradients(double xi, double eta) {
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  const Eigen::Vector2d g0(-1.0, -1.0), g1(1.0, 0.0), g2(0.0, 1.0);
  return {(4.0 * l0 - 1.0) * g0, (4.0 * l1 - 1.0) * g1, (4.0 * l2 - 1.0) * g2,
          4.0 * (l0 * g1 + l1 * g0), 4.0 * (l1 * g2 + l2 * g1), 4.0 * (l2 * g0 + l0 * g2)};
}

/// Node numbering for continuous P2: vertex v -> v, edge e -> num_vertices + e.
/// Nodes on the boundary (vertex or midside) are Dirichlet nodes.
class P2Space {
 public:
  explicit P2Space(const Mesh& mesh) : mesh_(&mesh) {
    const std::size_t nv = mesh.num_vertices(), ne = mesh.num_edges();
    dirichlet_.assign(nv + ne, false);
    for (std::size_t v = 0; v < nv; ++v) dirichlet_[v] = mesh.boundary_vertex()[v];
    for (std::size_t e = 0; e < ne; ++e) dirichlet_[nv + e] = mesh.boundary_edge()[e];
    free_index_.assign(nv + ne, -1);
    for (std::size_t n = 0; n < nv + ne; ++n)
      if (!dirichlet_[n]) {
        free_index_[n] = static_cast<int>(free_nodes_.size());
        free_nodes_.push_back(static_cast<int>(n));
      }
  }

  const Mesh& mesh() const { return *mesh_; }
  std::size_t num_nodes() const { return dirichlet_.size(); }
  std::size_t num_free() const { return free_nodes_.size(); }
  bool is_dirichlet(std::size_t node) const { return dirichlet_[node]; }
  int free_index(std::size_t node) const { return free_index_[node]; }
  const std::vector<int>& free_nodes() const { return free_nodes_; }

  std::array<int, 6> element_nodes(std::size_t t) const {
    const auto& tr = mesh_->triangles()[t];
    const auto& te = mesh_->triangle_edges()[t];
    const int nv = static_cast<int>(mesh_->num_vertices());
    return {tr[0], tr[1], tr[2], nv + te[0], nv + te[1], nv + te[2]};
  }

  Vec2 node_coordinate(std::size_t node) const {
    const std::size_t nv = mesh_->num_vertices();
    if (node < nv) return mesh_->vertices()[node];
    const auto& e = mesh_->edges()[node - nv];
    return 0.5 * (mesh_->vertices()[e[0]] + mesh_->vertices()[e[1]]);
  }

 private:
  const Mesh* mesh_;
  std::vector<bool> dirichlet_;
  std::vector<int> free_index_;
  std::vector<int> free_nodes_;
};

/// Affine element geometry: Jacobian of (xi, eta) -> x, its inverse transpose, and area.
struct ElementGeometry {
  Eigen::Matrix2d jac;
  Eigen::Matrix2d inv_t;
  double area;
};

inline ElementGeometry element_geometry(const Mesh& m, std::size_t t) {
  const auto& tr = m.triangles()[t];
  const Vec2& p0 = m.vertices()[tr[0]];
  ElementGeometry g;
  g.jac.col(0) = m.vertices()[tr[1]] - p0;
  g.jac.col(1) = m.vertices()[tr[2]] - p0;
  const double det = g.jac.determinant();
  if (!(det > 0.0)) throw DomainError("zero-area or inverted triangle in assembly");
  g.inv_t = g.jac.inverse().transpose();
  g.area = 0.5 * det;
  return g;
}

}  // namespace lamespec::fem
