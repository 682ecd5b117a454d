#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "lamespec/fem/domains.hpp"
#include "lamespec/fem/mesh.hpp"

using namespace lamespec;
using namespace lamespec::fem;

namespace {

int count_true(const std::vector<bool>& v) { return static_cast<int>(std::count(v.begin(), v.end(), true)); }

double min_angle_deg(const Mesh& m) {
  double best = 180.0;
  for (const auto& t : m.triangles())
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = m.vertices()[t[(i + 1) % 3]] - m.vertices()[t[i]];
      const Vec2 b = m.vertices()[t[(i + 2) % 3]] - m.vertices()[t[i]];
      best = std::min(best, std::acos(a.dot(b) / (a.norm() * b.norm())) * 180.0 / std::numbers::pi);
    }
  return best;
}

}  // namespace

TEST(Mesh, SmallRectangle) {
  const Mesh m = mesh_rectangle(1.0, 1.0, 2, 2);
  EXPECT_EQ(m.num_vertices(), 9u);
  EXPECT_EQ(m.num_triangles(), 8u);
  EXPECT_EQ(m.num_edges(), 16u);
  EXPECT_EQ(count_true(m.boundary_edge()), 8);
  EXPECT_EQ(count_true(m.boundary_vertex()), 8);
  EXPECT_NEAR(m.area(), 1.0, 1e-15);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) EXPECT_NEAR(m.signed_area(t), 0.125, 1e-15);
}

TEST(Mesh, RectangleAlternatesDiagonals) {
  const Mesh m = mesh_rectangle(2.0, 1.0, 4, 2);
  // All four triangles touching the centre vertex of a 2x2 block share it (union-jack).
  const int centre = 1 * 5 + 1;
  int touching = 0;
  for (const auto& t : m.triangles()) touching += std::count(t.begin(), t.end(), centre);
  EXPECT_EQ(touching, 8);
  EXPECT_NEAR(m.area(), 2.0, 1e-14);
  EXPECT_THROW(mesh_rectangle(1.0, 1.0, 1, 2), DomainError);
  EXPECT_THROW(mesh_rectangle(-1.0, 1.0, 2, 2), DomainError);
}

TEST(Mesh, EulerCharacteristicAndOrientation) {
  for (const Mesh& m : {mesh_rectangle(3.0, 1.0, 7, 3), mesh_ellipse(1.0, 4, 32), mesh_ellipse(1.6, 8, 64)}) {
    EXPECT_EQ(static_cast<long>(m.num_vertices()) - static_cast<long>(m.num_edges()) + static_cast<long>(m.num_triangles()), 1);
    for (std::size_t t = 0; t < m.num_triangles(); ++t) EXPECT_GT(m.signed_area(t), 0.0);
    EXPECT_EQ(count_true(m.boundary_edge()), count_true(m.boundary_vertex()));
  }
}

TEST(Mesh, DiskAndEllipseGeometry) {
  for (double a : {1.0, 1.5, 2.0}) {
    const Mesh m = mesh_ellipse(a, 8, 64);
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
      const Vec2 p = m.vertices()[v];
      const double level = std::pow(p.x() / a, 2) + std::pow(p.y() * a, 2);
      if (m.boundary_vertex()[v])
        EXPECT_NEAR(level, 1.0, 1e-13);
      else
        EXPECT_LT(level, 1.0 - 1e-6);
    }
    // Inscribed polygon: area below pi, error O(n_t^-2).
    EXPECT_LT(m.area(), std::numbers::pi);
    EXPECT_GT(m.area(), std::numbers::pi * (1.0 - 2.0e-2));
  }
  EXPECT_GT(min_angle_deg(mesh_ellipse(1.0, 16, 128)), 20.0);
  EXPECT_THROW(mesh_ellipse(1.0, 2, 32), DomainError);
  EXPECT_THROW(mesh_ellipse(0.0, 4, 32), DomainError);
}

TEST(Mesh, RingSectorsDoubleOutward) {
  const std::vector<int> s = fem::detail::ring_sectors(16, 128);
  EXPECT_GE(s[1], 8);
  EXPECT_EQ(s[16], 128);
  for (int i = 2; i <= 16; ++i) EXPECT_TRUE(s[i] == s[i - 1] || s[i] == 2 * s[i - 1]) << i;
}

TEST(Mesh, DiskAreaConvergesUnderRefinement) {
  double prev = 1.0;
  for (int r = 0; r <= 3; ++r) {
    const Mesh m = build_mesh(DiskDomain{}, ElasticityParams::from_poisson(0.3, 1.0), r);
    const double err = std::numbers::pi - m.area();
    EXPECT_GT(err, 0.0);
    EXPECT_LT(err, 0.3 * prev);  // second order in the outer sector count
    prev = err;
  }
}

TEST(Mesh, AffineMap) {
  const Mesh m = mesh_rectangle(1.0, 1.0, 3, 3);
  Eigen::Matrix2d J;
  J << 2.0, 0.5, 0.0, -1.5;  // reflection + shear
  const Mesh g = mesh_affine_map(m, J, Vec2(1.0, -2.0));
  EXPECT_NEAR(g.area(), 3.0, 1e-14);
  for (std::size_t t = 0; t < g.num_triangles(); ++t) EXPECT_GT(g.signed_area(t), 0.0);
  EXPECT_EQ(g.boundary_vertex(), m.boundary_vertex());
  EXPECT_THROW(mesh_affine_map(m, Eigen::Matrix2d::Zero(), Vec2::Zero()), DomainError);
}

TEST(Mesh, TextRoundTrip) {
  const Mesh m = mesh_ellipse(1.3, 4, 32);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh r = read_mesh(ss);
  ASSERT_EQ(r.num_vertices(), m.num_vertices());
  ASSERT_EQ(r.num_triangles(), m.num_triangles());
  for (std::size_t v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(r.vertices()[v], m.vertices()[v]);
  EXPECT_EQ(r.triangles(), m.triangles());
  EXPECT_EQ(r.boundary_vertex(), m.boundary_vertex());
  std::stringstream bad("3 1\n0 0 1\n1 0 1\n");
  EXPECT_THROW(read_mesh(bad), DomainError);
}

TEST(Mesh, RejectsInvalidInput) {
  const std::vector<Vec2> v = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const std::vector<bool> all(4, true);
  EXPECT_THROW(Mesh(v, {{0, 1, 4}}, all), DomainError);                 // index out of range
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, std::vector<bool>(3, true)), DomainError);  // degenerate
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}, {1e-14, 0}}, {{0, 1, 2}, {3, 1, 2}}, all), DomainError);  // duplicate vertex
  EXPECT_THROW(Mesh(v, {{0, 1, 3}, {0, 3, 2}}, {true, true, true, false}), DomainError);  // boundary flag mismatch
  EXPECT_THROW(Mesh(v, {{0, 1, 3}, {0, 3, 2}}, std::vector<bool>(3, true)), DomainError);
  const std::vector<Vec2> w = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, -1}};
  EXPECT_THROW(Mesh(w, {{0, 1, 2}, {1, 3, 2}, {0, 4, 1}, {0, 1, 3}}, std::vector<bool>(5, true)), DomainError);  // edge in 3 triangles
}
