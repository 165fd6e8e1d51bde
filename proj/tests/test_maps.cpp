#include <gtest/gtest.h>

#include "corrdyn/maps.hpp"
#include "support/generators.hpp"

using namespace corrdyn;
using namespace corrdyn::testing;

namespace {

const IntPoly Z{0, 1};
RationalMap poly_map(IntPoly f) { return make_polynomial_map(std::move(f)); }
AlgSet points(std::initializer_list<ProjPoint> pts) { return AlgSet::from_points(pts); }

}  // namespace

TEST(MakeMap, CancelsCommonFactors) {
  const RationalMap a = make_map(IntPoly{-1, 0, 1}, IntPoly{-1, 1});
  EXPECT_EQ(a.num(), (IntPoly{1, 1}));
  EXPECT_EQ(a.den(), (IntPoly{1}));
  EXPECT_EQ(a.degree(), 1);

  const RationalMap b = make_map(IntPoly{0, 2}, IntPoly{2});
  EXPECT_EQ(b.num(), Z);
  EXPECT_EQ(b.degree(), 1);

  EXPECT_EQ(make_map(IntPoly{0, 0, 1}, IntPoly{1}).degree(), 2);
}

TEST(MakeMap, RejectsConstantsAndZeroDenominator) {
  try {
    make_map(IntPoly{-1, 1}, IntPoly{-2, 2});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "map must be non-constant");
  }
  EXPECT_THROW(make_map(IntPoly{1, 1}, IntPoly{}), std::invalid_argument);
  EXPECT_THROW(make_map(IntPoly{}, IntPoly{1, 1}), std::invalid_argument);
}

TEST(MakeMap, DenominatorSignNormalized) {
  const RationalMap m = make_map(IntPoly{0, 3}, IntPoly{-6, -3});
  EXPECT_EQ(m.num(), (IntPoly{0, -1}));
  EXPECT_EQ(m.den(), (IntPoly{2, 1}));
}

TEST(EvalMap, Examples) {
  const RationalMap sq = poly_map(IntPoly{0, 0, 1});
  EXPECT_EQ(eval_map(sq, ProjPoint(Rational(3, 2))), ProjPoint(Rational(9, 4)));
  EXPECT_TRUE(eval_map(sq, ProjPoint::infinity()).is_infinity());
  const RationalMap inv = make_map(IntPoly{1}, Z);
  EXPECT_TRUE(eval_map(inv, ProjPoint(0)).is_infinity());
  EXPECT_EQ(eval_map(inv, ProjPoint::infinity()), ProjPoint(0));
  // (2z + 1)/(z - 3) at infinity is 2.
  EXPECT_EQ(eval_map(make_map(IntPoly{1, 2}, IntPoly{-3, 1}), ProjPoint::infinity()), ProjPoint(2));
}

TEST(ComposeMaps, Examples) {
  const RationalMap sq = poly_map(IntPoly{0, 0, 1});
  EXPECT_EQ(compose_maps(sq, poly_map(IntPoly{1, 1})).num(), (IntPoly{1, 2, 1}));
  EXPECT_TRUE(maps_equal(compose_maps(sq, poly_map(IntPoly{0, -1})), sq));
  const RationalMap cubic = make_map(IntPoly{1, 0, 0, 1}, IntPoly{0, 1});
  EXPECT_EQ(compose_maps(sq, cubic).degree(), 6);
  EXPECT_EQ(compose_maps(cubic, sq).degree(), 6);
}

TEST(ComposeMaps, DegreeIsMultiplicative) {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const RationalMap F = random_map(rng, 3, 9), G = random_map(rng, 3, 9);
    EXPECT_EQ(compose_maps(F, G).degree(), F.degree() * G.degree());
  }
}

TEST(MapsEqual, Examples) {
  EXPECT_TRUE(maps_equal(make_map(IntPoly{-1, 0, 1}, IntPoly{-1, 1}), poly_map(IntPoly{1, 1})));
  EXPECT_TRUE(maps_equal(poly_map(IntPoly{0, 0, 1}), compose_maps(poly_map(IntPoly{0, 0, 1}), poly_map(IntPoly{0, -1}))));
  EXPECT_FALSE(maps_equal(poly_map(IntPoly{0, 0, 1}), poly_map(IntPoly{1, 2, 1})));
}

TEST(AlgSetBasics, CanonicalForm) {
  const AlgSet s = points({ProjPoint(Rational(1, 2)), ProjPoint(Rational(1, 2)), ProjPoint::infinity()});
  EXPECT_EQ(s.cardinality(), 2);
  EXPECT_EQ(s.poly(), (IntPoly{-1, 2}));
  EXPECT_TRUE(s.contains(ProjPoint::infinity()));
  EXPECT_TRUE(s.contains(ProjPoint(Rational(1, 2))));
  EXPECT_FALSE(s.contains(ProjPoint(2)));
  EXPECT_EQ(AlgSet().cardinality(), 0);
  EXPECT_EQ(AlgSet::infinity_only().cardinality(), 1);
  // Canonical reduction is idempotent.
  EXPECT_EQ(AlgSet::from_poly(s.poly(), true), s);
}

TEST(AlgSetBasics, SetOperations) {
  const AlgSet a = points({0, 1, 2, ProjPoint::infinity()});
  const AlgSet b = points({1, 2, 3});
  EXPECT_FALSE(is_subset(a, b));
  EXPECT_EQ(set_difference(a, b), points({0, ProjPoint::infinity()}));
  EXPECT_EQ(set_union(a, b), points({0, 1, 2, 3, ProjPoint::infinity()}));
  EXPECT_TRUE(is_subset(points({1, 2}), b));
}

TEST(RationalPoints, FindsExactlyTheRationalRoots) {
  const AlgSet s = AlgSet::from_poly(IntPoly{-2, 0, 1} * IntPoly{-3, 4} * IntPoly{5, 1}, true);
  const auto pts = rational_points(s);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_TRUE(pts[0].is_infinity());
  EXPECT_EQ(pts[1], ProjPoint(-5));
  EXPECT_EQ(pts[2], ProjPoint(Rational(3, 4)));
  EXPECT_EQ(to_string(points({-3, Rational(1, 2)})), "{-3, 1/2}");
}

TEST(RationalPoints, IllConditionedClusters) {
  std::vector<ProjPoint> v;
  for (long i = 1; i <= 30; ++i) v.emplace_back(i);
  for (long i = 1; i <= 10; ++i) v.emplace_back(Rational(Integer(1000 * i + 1), Integer(1000)));
  const AlgSet s = AlgSet::from_points(v);
  EXPECT_EQ(rational_points(s).size(), v.size());
  const AlgSet mixed = AlgSet::from_poly(s.poly() * IntPoly{-7, 0, 0, 1});
  EXPECT_EQ(rational_points(mixed).size(), v.size());
}

TEST(RationalPoints, RecoversRandomRationalSets) {
  Rng rng(28);
  for (int t = 0; t < 50; ++t) {
    std::vector<ProjPoint> v;
    for (int i = 0; i < 15; ++i) v.push_back(random_rational(rng, 1000));
    const AlgSet s = AlgSet::from_points(v);
    const auto got = rational_points(s);
    EXPECT_EQ(static_cast<int>(got.size()), s.cardinality());
    for (const auto& x : v) EXPECT_NE(std::find(got.begin(), got.end(), x), got.end());
  }
}

TEST(Pullback, Examples) {
  const RationalMap sq = poly_map(IntPoly{0, 0, 1});
  EXPECT_EQ(pullback_set(sq, points({4})).poly(), (IntPoly{-4, 0, 1}));
  const AlgSet five = pullback_set(sq, points({0, 1, 4}));
  EXPECT_EQ(five.cardinality(), 5);
  EXPECT_EQ(five, points({0, 1, -1, 2, -2}));
  EXPECT_EQ(pullback_set(sq, AlgSet::infinity_only()), AlgSet::infinity_only());
  EXPECT_TRUE(pullback_set(sq, AlgSet()).empty());
}

TEST(Pullback, RationalMapThroughInfinity) {
  // F = 1/z: F^{-1}({0}) = {inf}, F^{-1}({inf}) = {0}.
  const RationalMap inv = make_map(IntPoly{1}, Z);
  EXPECT_EQ(pullback_set(inv, points({0})), AlgSet::infinity_only());
  EXPECT_EQ(pullback_set(inv, AlgSet::infinity_only()), points({0}));
  // F = (z^2 + 1)/(z - 1): the fiber over infinity is {1, inf}.
  const RationalMap F = make_map(IntPoly{1, 0, 1}, IntPoly{-1, 1});
  EXPECT_EQ(pullback_set(F, AlgSet::infinity_only()), points({1, ProjPoint::infinity()}));
}

TEST(Pushforward, Examples) {
  const RationalMap B = poly_map(IntPoly{1, 2, 1});
  EXPECT_EQ(pushforward_set(B, points({-1})), points({0}));
  EXPECT_EQ(pushforward_set(B, points({0, -2})), points({1}));
  // (1 + sqrt2)^2 = 3 + 2 sqrt2; expanding (w - 3 - 2sqrt2)(w - 3 + 2sqrt2) gives w^2 - 6w + 1.
  EXPECT_EQ(pushforward_set(B, AlgSet::from_poly(IntPoly{-2, 0, 1})).poly(), (IntPoly{1, -6, 1}));
  EXPECT_TRUE(pushforward_set(B, AlgSet()).empty());
}

TEST(Pushforward, PolesAndInfinity) {
  const RationalMap F = make_map(IntPoly{1, 0, 1}, IntPoly{-1, 1});
  // F(1) = inf, F(2) = 5, F(inf) = inf.
  EXPECT_EQ(pushforward_set(F, points({1, 2})), points({5, ProjPoint::infinity()}));
  EXPECT_EQ(pushforward_set(F, points({ProjPoint::infinity()})), AlgSet::infinity_only());
  // (2z + 1)/(z - 3) sends infinity to 2 and 0 to -1/3.
  const RationalMap G = make_map(IntPoly{1, 2}, IntPoly{-3, 1});
  EXPECT_EQ(pushforward_set(G, points({0, ProjPoint::infinity()})), points({Rational(-1, 3), 2}));
}

TEST(Pushforward, ThreadCountDoesNotChangeResult) {
  Rng rng(22);
  for (int t = 0; t < 20; ++t) {
    const RationalMap F = random_map(rng, 3, 9);
    const AlgSet T = random_set(rng, 5, 9);
    EXPECT_EQ(pushforward_set(F, T, {4}), pushforward_set(F, T, {1}));
  }
}

TEST(RiemannHurwitz, Examples) {
  const auto r1 = verify_rh_bound(poly_map(IntPoly{0, 0, 1}), points({0, 1, 4}));
  EXPECT_EQ(r1.actual, 5);
  EXPECT_EQ(r1.lower, 4);
  EXPECT_EQ(r1.upper, 6);
  EXPECT_TRUE(r1.holds);

  for (int d = 2; d <= 5; ++d) {
    const auto r = verify_rh_bound(poly_map(IntPoly::monomial(1, static_cast<std::size_t>(d))),
                                   points({0, ProjPoint::infinity()}));
    EXPECT_EQ(r.actual, 2);
    EXPECT_EQ(r.lower, 2);
    EXPECT_TRUE(r.holds);
  }

  const auto r3 = verify_rh_bound(poly_map(IntPoly{-2, 0, 1}), points({2, -2}));
  EXPECT_EQ(r3.actual, 3);
  EXPECT_EQ(r3.lower, 2);
  EXPECT_TRUE(r3.holds);
}

TEST(FunctorProperties, PushforwardOfPullbackIsIdentity) {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const RationalMap F = random_map(rng, 3, 20);
    const AlgSet S = random_set(rng, static_cast<int>(uniform(rng, 1, 5)), 20);
    ASSERT_EQ(pushforward_set(F, pullback_set(F, S)), S) << to_string(F) << " on " << to_string(S.poly());
  }
}

TEST(FunctorProperties, PullbackIsContravariant) {
  Rng rng(24);
  for (int t = 0; t < 60; ++t) {
    const RationalMap F = random_map(rng, 3, 9), G = random_map(rng, 2, 9);
    const AlgSet S = random_set(rng, static_cast<int>(uniform(rng, 1, 3)), 9);
    EXPECT_EQ(pullback_set(compose_maps(F, G), S), pullback_set(G, pullback_set(F, S)));
  }
}

TEST(FunctorProperties, CardinalityBoundsAndMembership) {
  Rng rng(25);
  for (int t = 0; t < 200; ++t) {
    const RationalMap F = random_map(rng, 3, 20);
    const AlgSet S = random_set(rng, static_cast<int>(uniform(rng, 1, 5)), 20);
    const auto rh = verify_rh_bound(F, S);
    EXPECT_TRUE(rh.holds) << rh.lower << " <= " << rh.actual << " <= " << rh.upper;

    // Any rational x with F(x) in S lies in the pullback; sample from a small grid.
    const AlgSet pre = pullback_set(F, S);
    for (long p = -6; p <= 6; ++p)
      for (long q = 1; q <= 3; ++q) {
        const ProjPoint x{Rational(Integer(p), Integer(q))};
        EXPECT_EQ(S.contains(eval_map(F, x)), pre.contains(x));
      }
    EXPECT_EQ(S.contains(eval_map(F, ProjPoint::infinity())), pre.has_infinity());
  }
}

TEST(FunctorProperties, ImageCardinalityBounds) {
  Rng rng(26);
  for (int t = 0; t < 100; ++t) {
    const RationalMap F = random_map(rng, 3, 20);
    const AlgSet T = random_set(rng, static_cast<int>(uniform(rng, 1, 5)), 20);
    const AlgSet img = pushforward_set(F, T);
    EXPECT_LE(img.cardinality(), T.cardinality());
    EXPECT_GE(img.cardinality() * F.degree(), T.cardinality());
    // The image of every rational point of T is in F(T).
    for (const auto& x : rational_points(T)) EXPECT_TRUE(img.contains(eval_map(F, x)));
  }
}
