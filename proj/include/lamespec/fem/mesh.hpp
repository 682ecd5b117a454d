#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lamespec/error.hpp"

namespace lamespec::fem {

using Vec2 = Eigen::Vector2d;
using Triangle = std::array<int, 3>;
using Edge = std::array<int, 2>;

/// Conforming triangle mesh with its edge table. Immutable after construction.
/// Triangle edges are ordered (v0, v1), (v1, v2), (v2, v0).
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles, std::vector<bool> boundary_vertex)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)), boundary_vertex_(std::move(boundary_vertex)) {
    if (boundary_vertex_.size() != vertices_.size()) throw DomainError("boundary flag count differs from vertex count");
    orient_triangles();
    check_duplicates();
    build_edges();
    check_boundary_flags();
  }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<bool>& boundary_vertex() const { return boundary_vertex_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& triangle_edges() const { return triangle_edges_; }
  const std::vector<bool>& boundary_edge() const { return boundary_edge_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  double signed_area(std::size_t t) const {
    const Triangle& tr = triangles_[t];
    const Vec2 a = vertices_[tr[1]] - vertices_[tr[0]];
    const Vec2 b = vertices_[tr[2]] - vertices_[tr[0]];
    return 0.5 * (a.x() * b.y() - a.y() * b.x());
  }

  double area() const {
    double s = 0.0;
    for (std::size_t t = 0; t < triangles_.size(); ++t) s += signed_area(t);
    return s;
  }

 private:
  void orient_triangles() {
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
      for (int v : triangles_[t])
        if (v < 0 || static_cast<std::size_t>(v) >= vertices_.size()) throw DomainError("triangle index out of range");
      const double a = signed_area(t);
      const Triangle& tr = triangles_[t];
      const double scale = (vertices_[tr[1]] - vertices_[tr[0]]).squaredNorm() +
                           (vertices_[tr[2]] - vertices_[tr[0]]).squaredNorm();
      if (!(std::abs(a) > 1e-14 * scale)) throw DomainError("degenerate triangle " + std::to_string(t));
      if (a < 0.0) std::swap(triangles_[t][1], triangles_[t][2]);
    }
  }

  void check_duplicates() const {
    std::vector<int> order(vertices_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      return vertices_[i].x() < vertices_[j].x() || (vertices_[i].x() == vertices_[j].x() && vertices_[i].y() < vertices_[j].y());
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const Vec2& p = vertices_[order[i]];
        const Vec2& q = vertices_[order[j]];
        if (q.x() - p.x() > 1e-12) break;
        if ((p - q).norm() <= 1e-12) throw DomainError("duplicate vertices in mesh");
      }
    }
  }

  void build_edges() {
    std::unordered_map<std::uint64_t, int> index;
    index.reserve(triangles_.size() * 2);
    std::vector<int> count;
    triangle_edges_.resize(triangles_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
      for (int e = 0; e < 3; ++e) {
        int a = triangles_[t][e], b = triangles_[t][(e + 1) % 3];
        if (a > b) std::swap(a, b);
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
        auto [it, inserted] = index.try_emplace(key, static_cast<int>(edges_.size()));
        if (inserted) {
          edges_.push_back({a, b});
          count.push_back(0);
        }
        ++count[it->second];
        triangle_edges_[t][e] = it->second;
      }
    }
    boundary_edge_.resize(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (count[e] > 2) throw DomainError("non-manifold edge in mesh");
      boundary_edge_[e] = count[e] == 1;
    }
  }

  void check_boundary_flags() const {
    std::vector<bool> on_boundary(vertices_.size(), false);
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (boundary_edge_[e]) on_boundary[edges_[e][0]] = on_boundary[edges_[e][1]] = true;
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      if (on_boundary[v] != boundary_vertex_[v])
        throw DomainError("boundary flag of vertex " + std::to_string(v) + " disagrees with mesh topology");
  }

  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<bool> boundary_vertex_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<bool> boundary_edge_;
};

/// (0, L) x (0, ell) split into nx * ny cells, each cut along one diagonal with
/// the direction alternating like a chessboard (union-jack pattern).
inline Mesh mesh_rectangle(double L, double ell, int nx, int ny) {
  if (!(L > 0.0) || !(ell > 0.0)) throw DomainError("rectangle sides must be positive");
  if (nx < 2 || ny < 2) throw DomainError("rectangle mesh needs nx, ny >= 2");
  std::vector<Vec2> verts;
  std::vector<bool> bnd;
  verts.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      // Exact endpoints keep the frame and the area exact.
      const double x = i == nx ? L : L * i / nx;
      const double y = j == ny ? ell : ell * j / ny;
      verts.emplace_back(x, y);
      bnd.push_back(i == 0 || j == 0 || i == nx || j == ny);
    }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Triangle> tris;
  tris.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((i + j) % 2 == 0) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      } else {
        tris.push_back({a, b, d});
        tris.push_back({b, c, d});
      }
    }
  return Mesh(std::move(verts), std::move(tris), std::move(bnd));
}

/// Image of the mesh under x -> J x + shift.
inline Mesh mesh_affine_map(const Mesh& m, const Eigen::Matrix2d& J, const Vec2& shift) {
  const double det = J.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * std::max(1.0, J.squaredNorm())) throw DomainError("singular affine map");
  std::vector<Vec2> verts;
  verts.reserve(m.num_vertices());
  for (const Vec2& v : m.vertices()) verts.push_back(J * v + shift);
  std::vector<Triangle> tris = m.triangles();
  if (det < 0.0)
    for (Triangle& t : tris) std::swap(t[1], t[2]);
  return Mesh(std::move(verts), std::move(tris), m.boundary_vertex());
}

namespace detail {

// Sector count on ring i: the smallest n_t / 2^j (not below 8) whose arc length
// is at most about 1.1 times the radial spacing; never more than doubling per ring.
inline std::vector<int> ring_sectors(int n_r, int n_t) {
  int base = n_t;
  while (base % 2 == 0 && base / 2 >= 8) base /= 2;
  std::vector<int> s(n_r + 1, 0);
  for (int i = 1; i <= n_r; ++i) {
    const double target = 0.9 * 2.0 * std::numbers::pi * i;
    int c = base;
    while (c < n_t && c < target) c *= 2;
    if (i > 1) c = std::clamp(c, s[i - 1], 2 * s[i - 1]);
    s[i] = c;
  }
  return s;
}

}  // namespace detail

/// Polar disk mesh (uniform rings, sector count doubling outward, central fan,
/// each ring cell cut into four triangles through its diagonal intersection),
/// mapped by diag(a, 1/a) onto the ellipse with semi-axes a and 1/a.
inline Mesh mesh_ellipse(double a, int n_r, int n_t) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("ellipse parameter a must be positive");
  if (n_r < 3) throw DomainError("mesh_ellipse needs n_r >= 3");
  if (n_t < 8) throw DomainError("mesh_ellipse needs n_t >= 8");
  const std::vector<int> s = detail::ring_sectors(n_r, n_t);
  std::vector<Vec2> verts;
  std::vector<bool> bnd;
  verts.emplace_back(0.0, 0.0);
  bnd.push_back(false);
  std::vector<int> ring_start(n_r + 1, 0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 1; i <= n_r; ++i) {
    ring_start[i] = static_cast<int>(verts.size());
    const double r = static_cast<double>(i) / n_r;
    for (int j = 0; j < s[i]; ++j) {
      const double th = two_pi * j / s[i];
      verts.emplace_back(r * std::cos(th), r * std::sin(th));
      bnd.push_back(i == n_r);
    }
  }
  auto node = [&](int i, int j) { return ring_start[i] + ((j % s[i]) + s[i]) % s[i]; };
  std::vector<Triangle> tris;
  for (int j = 0; j < s[1]; ++j) tris.push_back({0, node(1, j), node(1, j + 1)});
  auto add_center = [&](int p0, int p1, int q0, int q1) {
    // Intersection of diagonals p0-q1 and p1-q0.
    const Vec2 A = verts[p0], B = verts[q1], C = verts[p1], D = verts[q0];
    Eigen::Matrix2d M;
    M.col(0) = B - A;
    M.col(1) = C - D;
    const Eigen::Vector2d st = M.colPivHouseholderQr().solve(C - A);
    verts.push_back(A + st(0) * (B - A));
    bnd.push_back(false);
    return static_cast<int>(verts.size()) - 1;
  };
  for (int i = 1; i < n_r; ++i) {
    if (s[i + 1] == s[i]) {
      for (int j = 0; j < s[i]; ++j) {
        const int p0 = node(i, j), p1 = node(i, j + 1), q0 = node(i + 1, j), q1 = node(i + 1, j + 1);
        const int c = add_center(p0, p1, q0, q1);
        tris.push_back({p0, p1, c});
        tris.push_back({p1, q1, c});
        tris.push_back({q1, q0, c});
        tris.push_back({q0, p0, c});
      }
    } else {
      for (int j = 0; j < s[i]; ++j) {
        const int p0 = node(i, j), p1 = node(i, j + 1);
        const int q0 = node(i + 1, 2 * j), qm = node(i + 1, 2 * j + 1), q1 = node(i + 1, 2 * j + 2);
        tris.push_back({p0, qm, q0});
        tris.push_back({p0, p1, qm});
        tris.push_back({p1, q1, qm});
      }
    }
  }
  for (Vec2& v : verts) v = Vec2(a * v.x(), v.y() / a);
  return Mesh(std::move(verts), std::move(tris), std::move(bnd));
}

/// Write the mesh as `NV NT`, NV lines `x y boundary_flag`, NT lines `i j k`.
inline void write_mesh(std::ostream& os, const Mesh& m) {
  std::ostringstream buf;
  buf.precision(17);
  buf << m.num_vertices() << ' ' << m.num_triangles() << '\n';
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    buf << m.vertices()[v].x() << ' ' << m.vertices()[v].y() << ' ' << (m.boundary_vertex()[v] ? 1 : 0) << '\n';
  for (const Triangle& t : m.triangles()) buf << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << buf.str();
}

inline Mesh read_mesh(std::istream& is) {
  long nv = -1, nt = -1;
  if (!(is >> nv >> nt) || nv < 3 || nt < 1) throw DomainError("mesh file: bad header");
  std::vector<Vec2> verts(nv);
  std::vector<bool> bnd(nv);
  for (long i = 0; i < nv; ++i) {
    double x, y;
    int f;
    if (!(is >> x >> y >> f)) throw DomainError("mesh file: truncated vertex list");
    verts[i] = Vec2(x, y);
    bnd[i] = f != 0;
  }
  std::vector<Triangle> tris(nt);
  for (long t = 0; t < nt; ++t)
    if (!(is >> tris[t][0] >> tris[t][1] >> tris[t][2])) throw DomainError("mesh file: truncated triangle list");
  return Mesh(std::move(verts), std::move(tris), std::move(bnd));
}

}  // namespace lamespec::fem
