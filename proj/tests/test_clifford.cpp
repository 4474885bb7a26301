#include <gtest/gtest.h>

#include <random>

#include "cliffkit/clifford.hpp"
#include "oracles.hpp"

using namespace cliffkit;

TEST(BladeProduct, MatchesSymbolSortUpToDim5) {
  for (int n = 1; n <= 5; ++n)
    for (std::uint32_t a = 0; a < (1u << n); ++a)
      for (std::uint32_t b = 0; b < (1u << n); ++b) {
        const auto [sign, mask] = oracle::symbol_sort_product(a, b, n);
        const BladeProduct p = blade_product(BladeIndex{a}, BladeIndex{b}, n);
        ASSERT_EQ(p.sign, sign) << "n=" << n << " a=" << a << " b=" << b;
        ASSERT_EQ(p.blade.mask, mask);
      }
}

TEST(BladeProduct, GeneratorRelations) {
  for (int n = 1; n <= kMaxAlgebraDim; ++n)
    for (int i = 1; i <= n; ++i) {
      const BladeProduct sq = blade_product(generator(i), generator(i), n);
      EXPECT_EQ(sq.sign, -1);
      EXPECT_EQ(sq.blade.mask, 0u);
      for (int j = i + 1; j <= n; ++j) {
        const BladeProduct ij = blade_product(generator(i), generator(j), n);
        const BladeProduct ji = blade_product(generator(j), generator(i), n);
        EXPECT_EQ(ij.blade, ji.blade);
        EXPECT_EQ(ij.sign, -ji.sign);
      }
    }
}

TEST(BladeProduct, RejectsForeignBlades) {
  EXPECT_THROW(blade_product(generator(3), generator(1), 2), InvalidArgument);
  EXPECT_THROW(blade_product(BladeIndex{0}, BladeIndex{0}, 0), InvalidArgument);
  EXPECT_THROW(blade_product(BladeIndex{0}, BladeIndex{0}, kMaxAlgebraDim + 1), InvalidArgument);
}

TEST(BladeIndex, Names) {
  EXPECT_EQ(BladeIndex{0}.name(), "e0");
  EXPECT_EQ(BladeIndex{0b11}.name(), "e12");
  EXPECT_EQ(BladeIndex{0b101}.name(), "e13");
  EXPECT_EQ(BladeIndex{(1u << 9) | 1u}.name(), "e1_10");
}

TEST(Multivector, QuaternionTable) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> p{u(rng), u(rng), u(rng), u(rng)}, q{u(rng), u(rng), u(rng), u(rng)};
    // 1, i, j, k -> e0, e1, e2, e12
    const Multivector a(2, p), b(2, q);
    const auto ref = oracle::quaternion_mul(p, q);
    const Multivector c = a * b;
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(c.coeff(i), ref[i], 1e-15);
  }
}

TEST(Multivector, Associativity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n : {3, 4}) {
    auto rnd = [&] {
      Multivector m(n);
      for (double& c : m.coeffs()) c = u(rng);
      return m;
    };
    const Multivector a = rnd(), b = rnd(), c = rnd();
    const Multivector d = (a * b) * c - a * (b * c);
    EXPECT_LT(mv_norm(d), 1e-12);
  }
}

TEST(Multivector, ConjugationReversesProducts) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 3;
  Multivector a(n), b(n);
  for (double& c : a.coeffs()) c = u(rng);
  for (double& c : b.coeffs()) c = u(rng);
  EXPECT_LT(mv_norm(mv_conj(a * b) - mv_conj(b) * mv_conj(a)), 1e-12);
  // conj(e_j) = -e_j
  EXPECT_EQ(mv_conj(Multivector::blade(n, generator(2))).coeff(2), -1.0);
}

TEST(Multivector, VectorSquareIsMinusNormSquared) {
  const double x[] = {0.3, -1.2, 2.0};
  const Multivector v = embed_vector(x);
  const Multivector s = v * v;
  EXPECT_NEAR(s.coeff(0), -(0.09 + 1.44 + 4.0), 1e-14);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_NEAR(s.coeff(i), 0.0, 1e-14);
}

TEST(Multivector, VectorInverse) {
  const double x[] = {1.0, 2.0};
  const Multivector v = embed_vector(x);
  const Multivector one = v * vector_inverse(v);
  EXPECT_NEAR(one.coeff(0), 1.0, 1e-15);
  EXPECT_NEAR(one.coeff(3), 0.0, 1e-15);
  EXPECT_THROW(vector_inverse(Multivector(2)), DivisionByZero);
  EXPECT_THROW(vector_inverse(Multivector::scalar(2, 1.0)), InvalidArgument);
}

TEST(Multivector, DimensionChecks) {
  EXPECT_THROW(Multivector(0), InvalidArgument);
  EXPECT_THROW(Multivector(kMaxAlgebraDim + 1), InvalidArgument);
  EXPECT_THROW(Multivector(2) + Multivector(3), InvalidArgument);
  EXPECT_THROW(Multivector(2, std::vector<double>(3)), InvalidArgument);
}

TEST(Multivector, VectorKernelsMatchFullProduct) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 3;
  Multivector f(n);
  for (double& c : f.coeffs()) c = u(rng);
  const double v[] = {0.4, -0.7, 1.1};
  const Multivector vv = embed_vector(v);
  Multivector left(n), right(n);
  accumulate_vector_left(v, f, 2.0, left);
  accumulate_vector_right(f, v, 2.0, right);
  EXPECT_LT(mv_norm(left - (vv * f) * 2.0), 1e-14);
  EXPECT_LT(mv_norm(right - (f * vv) * 2.0), 1e-14);
}

TEST(Multivector, ScalarPairingIsEuclidean) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  Multivector a(3), b(3);
  for (double& c : a.coeffs()) c = u(rng);
  for (double& c : b.coeffs()) c = u(rng);
  double dotp = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dotp += a.coeff(i) * b.coeff(i);
  EXPECT_NEAR(scalar_pairing(a, b), dotp, 1e-14);
  EXPECT_NEAR(mv_norm_squared(a), scalar_pairing(a, a), 1e-14);
}
