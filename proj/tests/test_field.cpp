#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cliffkit/field.hpp"
#include "cliffkit/fields.hpp"

using namespace cliffkit;

namespace {

// x1^2 x2 e0 + x2^3 e12 with hand-written derivatives.
CliffordField cubic() {
  return CliffordField::closed_form(2, [](const Point& x) {
    Multivector m(2);
    m.coeff(0) = x[0] * x[0] * x[1];
    m.coeff(3) = x[1] * x[1] * x[1];
    return m;
  });
}

}  // namespace

TEST(Field, SampledFieldLookup) {
  std::vector<Point> nodes{{0.1, 0.2, 0}, {0.3, 0.4, 0}};
  std::vector<Multivector> vals{Multivector::scalar(2, 1.0), Multivector::scalar(2, 2.0)};
  const CliffordField f = CliffordField::sampled(2, nodes, vals);
  EXPECT_EQ(f(nodes[1]).coeff(0), 2.0);
  EXPECT_THROW(f(Point{0.5, 0.5, 0}), InvalidArgument);
  EXPECT_THROW(CliffordField::sampled(2, nodes, {vals[0]}), InvalidArgument);
}

TEST(Field, MaterializeCachesValues) {
  int calls = 0;
  const CliffordField f = CliffordField::closed_form(2, [&calls](const Point& x) {
    ++calls;
    return Multivector::scalar(2, x[0]);
  });
  const std::vector<Point> nodes{{0.1, 0, 0}, {0.2, 0, 0}, {0.3, 0, 0}};
  const CliffordField m = materialize(f, nodes);
  EXPECT_EQ(calls, 3);
  const auto v = m.sample_at(nodes);
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(v[2].coeff(0), 0.3);
}

TEST(Field, ArithmeticAndScaling) {
  const CliffordField a = named::linear(2).field();
  const CliffordField b = named::quadratic(2).field();
  const Point x{0.3, -0.2, 0};
  EXPECT_NEAR((a + b)(x).coeff(0), 0.3 + 0.13, 1e-15);
  EXPECT_NEAR((a - b)(x).coeff(0), 0.3 - 0.13, 1e-15);
  EXPECT_NEAR(a.scaled(-3.0)(x).coeff(0), -0.9, 1e-15);
  EXPECT_TRUE((a + b).has_dirac());
}

TEST(FiniteDifference, MixedPartialsOfCubic) {
  const Domain d = Domain::unit_disk();
  const Point x{0.2, 0.3, 0};
  const CliffordField f = cubic();
  // d1 d2 (x1^2 x2) = 2 x1, d2^2 (x2^3) = 6 x2, d1^2 (x1^2 x2) = 2 x2
  MultiIndex a12{{1, 1, 0}, 2}, a22{{0, 2, 0}, 2}, a11{{2, 0, 0}, 2};
  EXPECT_NEAR(multi_index_derivative(f, d, a12, x, 1e-3).coeff(0), 0.4, 1e-8);
  EXPECT_NEAR(multi_index_derivative(f, d, a22, x, 1e-3).coeff(3), 1.8, 1e-6);
  EXPECT_NEAR(multi_index_derivative(f, d, a11, x, 1e-3).coeff(0), 0.6, 1e-6);
}

TEST(FiniteDifference, CentralIsSecondOrder) {
  const Domain d = Domain::unit_disk();
  const CliffordField f = CliffordField::closed_form(2, [](const Point& x) {
    return Multivector::scalar(2, std::sin(3 * x[0]) * std::exp(x[1]));
  });
  const Point x{0.1, 0.2, 0};
  const double exact = 3 * std::cos(0.3) * std::exp(0.2);
  const double e1 = std::abs(partial_derivative(f, d, 0, x, 1e-2).coeff(0) - exact);
  const double e2 = std::abs(partial_derivative(f, d, 0, x, 5e-3).coeff(0) - exact);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.05);
}

TEST(FiniteDifference, AdaptiveStencilNearBoundary) {
  const Domain d = Domain::unit_box(2);
  const CliffordField f = named::quadratic(2).field();
  const Point x{0.0005, 0.5, 0};
  EXPECT_THROW(partial_derivative(f, d, 0, x, 1e-2), StencilOutOfDomain);
  // one-sided first differences of x1^2 at x1 = 0.0005: (x + h)^2 - x^2 over h = 2x + h
  EXPECT_NEAR(partial_derivative(f, d, 0, x, 1e-2, StencilPolicy::adaptive).coeff(0), 0.001 + 0.01, 1e-12);
  MultiIndex a{{2, 0, 0}, 2};
  EXPECT_NEAR(multi_index_derivative(f, d, a, x, 1e-2, StencilPolicy::adaptive).coeff(0), 2.0, 1e-9);
}

TEST(FiniteDifference, RejectsBadStep) {
  EXPECT_THROW(partial_derivative(cubic(), Domain::unit_disk(), 0, Point{}, 0.0), InvalidArgument);
}

TEST(Dirac, PolynomialAnalyticMatchesFiniteDifference) {
  std::mt19937_64 rng(1);
  const Domain d = Domain::unit_disk();
  const PolyField p = random_polynomial(2, 2, rng);
  const CliffordField analytic = p.field();
  const CliffordField numeric = CliffordField::closed_form(2, [p](const Point& x) { return p(x); });
  const Point x{0.1, -0.3, 0};
  EXPECT_LT(mv_norm(dirac_apply(analytic, d, x) - dirac_apply(numeric, d, x, 1e-3)), 1e-6);
  EXPECT_LT(mv_norm(dirac_right_apply(analytic, d, x) - dirac_right_apply(numeric, d, x, 1e-3)), 1e-6);
}

TEST(Dirac, SquareIsMinusLaplacian) {
  std::mt19937_64 rng(2);
  for (int n : {2, 3}) {
    const Domain d = n == 2 ? Domain::unit_disk() : Domain::unit_ball();
    const PolyField p = random_polynomial(n, 2, rng);
    const Point x{0.1, 0.2, n == 3 ? -0.1 : 0.0};
    const Multivector dd = p.dirac().dirac()(x);
    const Multivector lap = p.laplacian()(x);
    EXPECT_LT(mv_norm(dd + lap), 1e-12) << n;
    const CliffordField numeric = CliffordField::closed_form(n, [p](const Point& y) { return p(y); });
    EXPECT_LT(mv_norm(laplacian_apply(numeric, d, x, 1e-2) - lap), 1e-8);
    EXPECT_LT(mv_norm(laplacian_via_dirac(numeric, d, x, 1e-2) - lap), 1e-7);
  }
}

TEST(Dirac, MonogenicFieldIsAnnihilated) {
  const PolyField m = named::monogenic(2);
  const Point x{0.3, 0.7, 0};
  EXPECT_TRUE(m.dirac()(x).is_zero());
  EXPECT_TRUE(m.right_dirac()(x).is_zero());
}

TEST(Trace, RestrictionAndExtraction) {
  const Domain d = Domain::unit_disk();
  const BoundaryMesh b = make_boundary_mesh(d, 32);
  const CliffordField f = named::mixed(2).field();
  const CliffordField r = restrict_to_boundary(f, b);
  const CliffordField t = trace_extract(f, b, 1e-3);
  for (const Panel& p : b.panels) {
    EXPECT_NEAR(r(p.center).coeff(0), 1.0, 1e-14);
    EXPECT_LT(mv_norm(t(p.center) - f(p.center)), 1e-5);
  }
  EXPECT_THROW(trace_extract(f, b, 0.0), InvalidArgument);
  EXPECT_THROW(trace_extract(f, b, 1.5), InvalidOffset);
}

TEST(MultiIndex, Enumeration) {
  EXPECT_EQ(multi_indices_up_to(2, 2).size(), 6u);
  EXPECT_EQ(multi_indices_up_to(3, 2).size(), 10u);
  EXPECT_EQ(multi_indices_of_order(3, 3).size(), 10u);
  const auto all = multi_indices_up_to(2, 3);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LE(all[i - 1].total(), all[i].total());
}

TEST(NamedFields, LookupAndErrors) {
  for (const auto& name : field_names()) EXPECT_NO_THROW(make_named_field(name, 2)) << name;
  EXPECT_THROW(make_named_field("nope", 2), InvalidArgument);
  EXPECT_THROW(make_case("nope", 2), InvalidArgument);
  const Point x{0.5, 0.5, 0};
  EXPECT_NEAR(named::traceless(2)(Point{0.6, 0.8, 0}).coeff(0), 0.0, 1e-15);
  EXPECT_NEAR(named::harmonic(2).laplacian()(x).coeff(0), 0.0, 1e-15);
}

TEST(BumpFamily, SupportsStayInside) {
  const Domain d = Domain::unit_disk();
  const auto fam = default_test_family(d, 0.1);
  EXPECT_EQ(fam.size(), 5u * 4u * 2u);
  const BoundaryMesh b = make_boundary_mesh(d, 64);
  for (const auto& v : fam)
    for (const Panel& p : b.panels) EXPECT_TRUE(v(p.center - 0.1 * p.normal).is_zero());
  // analytic Dirac agrees with differences
  const CliffordField numeric = CliffordField::closed_form(2, [f = fam[3]](const Point& x) { return f(x); });
  const Point x{0.1, 0.05, 0};
  EXPECT_LT(mv_norm(dirac_apply(fam[3], d, x) - dirac_apply(numeric, d, x, 1e-4)), 1e-6);
}
