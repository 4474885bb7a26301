#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "cliffkit/mesh.hpp"

using namespace cliffkit;

namespace {

Point moment(const VolumeMesh& m) {
  Point s{};
  for (const Cell& c : m.cells) s = s + c.weight * c.center;
  return s;
}

}  // namespace

TEST(VolumeMesh, DiskWeightsSumToArea) {
  const VolumeMesh m = make_volume_mesh(Domain::unit_disk(), 32);
  EXPECT_EQ(m.size(), 32u * 32u);
  EXPECT_NEAR(m.total_weight(), std::numbers::pi, 1e-12);
  const Point c = moment(m);
  EXPECT_NEAR(c[0], 0.0, 1e-12);
  EXPECT_NEAR(c[1], 0.0, 1e-12);
  for (const Cell& cell : m.cells) EXPECT_TRUE(Domain::unit_disk().contains(cell.center));
}

TEST(VolumeMesh, BallWeightsSumToVolume) {
  const VolumeMesh m = make_volume_mesh(Domain::unit_ball(), 8);
  EXPECT_EQ(m.size(), 8u * 8u * 16u);
  EXPECT_NEAR(m.total_weight(), 4.0 / 3.0 * std::numbers::pi, 1e-12);
}

TEST(VolumeMesh, BoxIsUniform) {
  const Domain d = Domain::box(2, Point{-1, 0, 0}, Point{1, 3, 0});
  const VolumeMesh m = make_volume_mesh(d, 10);
  EXPECT_NEAR(m.total_weight(), 6.0, 1e-12);
  EXPECT_NEAR(m.max_diameter(), std::hypot(0.2, 0.3), 1e-14);
  const VolumeMesh c = make_volume_mesh(Domain::unit_box(3), 5);
  EXPECT_EQ(c.size(), 125u);
  EXPECT_NEAR(c.total_weight(), 1.0, 1e-12);
}

TEST(VolumeMesh, DiameterShrinksUnderRefinement) {
  for (const Domain& d : {Domain::unit_disk(), Domain::unit_ball(), Domain::unit_box(2)}) {
    const double a = make_volume_mesh(d, 8).max_diameter();
    const double b = make_volume_mesh(d, 16).max_diameter();
    EXPECT_LT(b, 0.6 * a) << d.name();
  }
}

TEST(BoundaryMesh, AreasAndNormals) {
  const BoundaryMesh c = make_boundary_mesh(Domain::unit_disk(), 64);
  EXPECT_NEAR(c.total_area(), 2.0 * std::numbers::pi, 1e-12);
  for (const Panel& p : c.panels) {
    EXPECT_NEAR(length(p.normal), 1.0, 1e-14);
    EXPECT_NEAR(dot(p.normal, p.center), 1.0, 1e-14);  // outward on the unit circle
  }
  const BoundaryMesh s = make_boundary_mesh(Domain::unit_ball(), 16);
  EXPECT_NEAR(s.total_area(), 4.0 * std::numbers::pi, 1e-12);
  const BoundaryMesh b = make_boundary_mesh(Domain::unit_box(3), 8);
  EXPECT_EQ(b.size(), 6u * 64u);
  EXPECT_NEAR(b.total_area(), 6.0, 1e-12);
  for (const Panel& p : b.panels) {
    // outward: stepping along the normal leaves the box
    EXPECT_FALSE(b.domain.contains(p.center + 1e-6 * p.normal));
    EXPECT_TRUE(b.domain.contains(p.center - 1e-6 * p.normal));
  }
}

TEST(BoundaryMesh, DivergenceTheoremOnNormals) {
  // int_dOmega nu dsigma = 0 and int_dOmega x . nu dsigma = n |Omega|
  for (const Domain& d : {Domain::unit_disk(), Domain::unit_ball(), Domain::unit_box(2), Domain::unit_box(3)}) {
    const BoundaryMesh b = make_boundary_mesh(d, 32);
    Point s{};
    double flux = 0.0;
    for (const Panel& p : b.panels) {
      s = s + p.area * p.normal;
      flux += p.area * dot(p.center, p.normal);
    }
    EXPECT_LT(length(s), 1e-10) << d.name();
    EXPECT_NEAR(flux, d.dim * d.volume(), 0.01 * d.volume()) << d.name();
  }
}

TEST(Mesh, RejectsCoarseResolution) {
  EXPECT_THROW(make_volume_mesh(Domain::unit_disk(), 3), InvalidArgument);
  EXPECT_THROW(make_boundary_mesh(Domain::unit_disk(), 7), InvalidArgument);
}

TEST(Mesh, CsvDump) {
  std::ostringstream os;
  write_csv(os, make_volume_mesh(Domain::unit_disk(), 4));
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "x1,x2,weight,diameter");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 17);
  std::ostringstream bs;
  write_csv(bs, make_boundary_mesh(Domain::unit_box(2), 8));
  EXPECT_EQ(bs.str().substr(0, bs.str().find('\n')), "x1,x2,area,n1,n2,diameter");
}

TEST(Domain, Geometry) {
  const Domain d = Domain::unit_disk();
  EXPECT_NEAR(d.signed_distance(Point{0.5, 0, 0}), -0.5, 1e-15);
  EXPECT_NEAR(d.exit_distance(Point{0.5, 0, 0}, Point{1, 0, 0}), 0.5, 1e-15);
  EXPECT_NEAR(d.exit_distance(Point{0.5, 0, 0}, Point{-1, 0, 0}), 1.5, 1e-15);
  const Point q = d.nearest_boundary_point(Point{0.3, 0.4, 0});
  EXPECT_NEAR(q[0], 0.6, 1e-15);
  EXPECT_NEAR(q[1], 0.8, 1e-15);
  const Domain b = Domain::unit_box(2);
  EXPECT_NEAR(b.signed_distance(Point{0.5, 0.9, 0}), -0.1, 1e-15);
  EXPECT_NEAR(b.signed_distance(Point{1.3, 1.4, 0}), 0.5, 1e-15);
  EXPECT_NEAR(b.exit_distance(Point{0.5, 0.5, 0}, Point{std::sqrt(0.5), std::sqrt(0.5), 0}), std::sqrt(0.5), 1e-15);
  const Point r = b.nearest_boundary_point(Point{0.2, 0.5, 0});
  EXPECT_NEAR(r[0], 0.0, 1e-15);
  EXPECT_NEAR(r[1], 0.5, 1e-15);
}
