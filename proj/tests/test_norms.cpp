#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cliffkit/fields.hpp"
#include "cliffkit/norms.hpp"
#include "oracles.hpp"

using namespace cliffkit;

namespace {

CliffordField cos_theta() {
  // cos(theta) e0 on the unit circle, extended as x1 / |x|
  return CliffordField::closed_form(2, [](const Point& x) { return Multivector::scalar(2, x[0] / length(x)); });
}

}  // namespace

TEST(Sobolev, ConstantAndLinear) {
  const VolumeMesh v = make_volume_mesh(Domain::unit_disk(), 64);
  EXPECT_NEAR(sobolev_norm(named::constant(2).field(), v, 0, 2).value, std::sqrt(std::numbers::pi), 1e-12);
  // |x1|^2 + |d1 x1|^2 integrates to pi/4 + pi
  EXPECT_NEAR(sobolev_norm(named::linear(2).field(), v, 1, 2).value, std::sqrt(1.25 * std::numbers::pi), 1e-3);
  // p = 4: int x1^4 = pi/8
  EXPECT_NEAR(sobolev_norm(named::linear(2).field(), v, 0, 4).value, std::pow(std::numbers::pi / 8, 0.25), 1e-3);
}

TEST(Sobolev, MonotoneInKExactly) {
  std::mt19937_64 rng(4);
  const VolumeMesh v = make_volume_mesh(Domain::unit_box(2), 12);
  for (int t = 0; t < 3; ++t) {
    const CliffordField f = random_polynomial(2, 3, rng).field();
    double prev = 0.0;
    for (int k = 0; k <= 3; ++k) {
      const double cur = sobolev_norm(f, v, k, 2.0).value;
      EXPECT_LE(prev, cur);
      prev = cur;
    }
  }
}

TEST(Sobolev, Errors) {
  const VolumeMesh v = make_volume_mesh(Domain::unit_disk(), 8);
  EXPECT_THROW(sobolev_norm(named::constant(2).field(), v, -1, 2), InvalidArgument);
  EXPECT_THROW(sobolev_norm(named::constant(2).field(), v, 0, 1.0), InvalidArgument);
}

TEST(Slobodeckij, ConstantHasZeroSeminorm) {
  const BoundaryMesh b = make_boundary_mesh(Domain::unit_disk(), 64);
  const NormReport r = slobodeckij_norm(named::constant(2).field(), b, 0.5, 2.0);
  EXPECT_EQ(r.seminorm, 0.0);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.diagonal_exclusion_count, 64u);
}

TEST(Slobodeckij, CosineOnCircleMatchesClosedForm) {
  const double exact = oracle::circle_cos_seminorm();
  const double a = slobodeckij_norm(cos_theta(), make_boundary_mesh(Domain::unit_disk(), 256), 0.5, 2.0).value;
  const double b = slobodeckij_norm(cos_theta(), make_boundary_mesh(Domain::unit_disk(), 1024), 0.5, 2.0).value;
  EXPECT_NEAR(a, exact, 0.01 * exact);
  EXPECT_NEAR(b, exact, 0.003 * exact);
  EXPECT_LT(std::abs(a - b), 0.01 * b);
}

TEST(Slobodeckij, HigherOrderIncludesLowerTerms) {
  const BoundaryMesh b = make_boundary_mesh(Domain::unit_disk(), 128);
  const NormReport r = slobodeckij_norm(named::linear(2).field(), b, 1.5, 2.0);
  // lower order contains int |x1|^2 dsigma = pi
  EXPECT_GT(r.lower_order, std::numbers::pi);
  EXPECT_GT(r.seminorm, 0.0);
  EXPECT_NEAR(r.value * r.value, r.lower_order + r.seminorm * r.seminorm, 1e-10);
}

TEST(Slobodeckij, Errors) {
  const BoundaryMesh b = make_boundary_mesh(Domain::unit_disk(), 16);
  EXPECT_THROW(slobodeckij_norm(named::linear(2).field(), b, 1.0, 2.0), InvalidArgument);
  EXPECT_THROW(slobodeckij_norm(named::linear(2).field(), b, 0.0, 2.0), InvalidArgument);
  EXPECT_THROW(trace_space_norm(named::linear(2).field(), b, 0, 2.0), InvalidArgument);
}

TEST(TangentialDerivative, ProjectsOutNormal) {
  // g = |x|^2 is constant on the circle: all tangential derivatives vanish.
  const Domain d = Domain::unit_disk();
  const CliffordField g = named::quadratic(2).field();
  for (int axis = 0; axis < 2; ++axis) {
    const CliffordField t = tangential_partial(g, d, axis);
    EXPECT_LT(mv_norm(t(Point{0.6, 0.8, 0})), 1e-9);
  }
}

TEST(Dual, ZeroFieldAndBumpFamily) {
  const Domain d = Domain::unit_disk();
  const VolumeMesh v = make_volume_mesh(d, 48);
  // x pairs to zero with centred scalar bumps, so use the full blade family
  const auto fam = default_test_family(d, 2.0 * v.max_diameter());
  EXPECT_EQ(dual_norm_lower_bound(named::zero(2).field(), v, 2.0, fam).value, 0.0);
  const CliffordField f = named::linear(2).field();
  const double lb = dual_norm_lower_bound(f, v, 2.0, fam).value;
  const double lp = sobolev_norm(f, v, 0, 2.0).value;
  EXPECT_GT(lb, 0.0);
  EXPECT_LE(lb, lp);
  EXPECT_NEAR(lp, std::sqrt(std::numbers::pi / 4), 1e-3);
}

TEST(Dual, RejectsBadFamilies) {
  const VolumeMesh v = make_volume_mesh(Domain::unit_disk(), 16);
  EXPECT_THROW(dual_norm_lower_bound(named::linear(2).field(), v, 2.0, {}), InvalidArgument);
  EXPECT_THROW(dual_norm_lower_bound(named::linear(2).field(), v, 2.0, {named::constant(2).field()}), InvalidArgument);
}

TEST(Holder, ConstantAndLinear) {
  const VolumeMesh v = make_volume_mesh(Domain::unit_disk(), 32);
  const Multivector c = Multivector::blade(2, BladeIndex{3}, -2.5);
  const NormReport rc = holder_norm(CliffordField::constant(c, 2), v, 0.5);
  EXPECT_EQ(rc.seminorm, 0.0);
  EXPECT_EQ(rc.value, 2.5);
  const NormReport rl = holder_norm(named::linear(2).field(), v, 0.5);
  EXPECT_LE(rl.seminorm, std::sqrt(2.0));
  EXPECT_GT(rl.seminorm, 0.98 * std::sqrt(2.0));
  EXPECT_TRUE(rl.lower_bound);
  EXPECT_THROW(holder_norm(named::linear(2).field(), v, 1.5), InvalidArgument);
}

TEST(Norms, HomogeneityAndTriangle) {
  std::mt19937_64 rng(8);
  const Domain d = Domain::unit_disk();
  const VolumeMesh v = make_volume_mesh(d, 32);
  const BoundaryMesh b = make_boundary_mesh(d, 64);
  const auto fam = default_test_family(d, 2.0 * v.max_diameter());
  const std::vector<std::function<double(const CliffordField&)>> norms{
      [&](const CliffordField& f) { return sobolev_norm(f, v, 1, 2.0).value; },
      [&](const CliffordField& f) { return slobodeckij_norm(f, b, 0.5, 3.0).value; },
      [&](const CliffordField& f) { return dual_norm_lower_bound(f, v, 1.5, fam).value; },
      [&](const CliffordField& f) { return holder_norm(f, v, 0.5, 500).value; }};
  const CliffordField f = random_polynomial(2, 2, rng).field();
  const CliffordField g = random_polynomial(2, 2, rng).field();
  for (const auto& N : norms) {
    const double nf = N(f), ng = N(g);
    EXPECT_NEAR(N(f.scaled(-3.0)), 3.0 * nf, 1e-9 * nf);
    EXPECT_LE(N(f + g), (nf + ng) * (1 + 1e-9));
  }
}
