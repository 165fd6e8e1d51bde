#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <set>

#include "corrdyn/heights.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace corrdyn;
using namespace corrdyn::testing;

TEST(WeilHeight, Examples) {
  EXPECT_DOUBLE_EQ(weil_height(ProjPoint(Rational(3, 2))).value, std::log(3.0));
  EXPECT_EQ(weil_height(ProjPoint(0)).value, 0.0);
  EXPECT_EQ(weil_height(ProjPoint::infinity()).value, 0.0);
  EXPECT_DOUBLE_EQ(weil_height(ProjPoint(Rational(-7, 3))).value, std::log(7.0));
  EXPECT_EQ(weil_height(ProjPoint(1)).error_bound, 0.0);
}

TEST(WeilHeight, HugeValuesStayFinite) {
  const Integer big = pow_int(10, 400);
  EXPECT_NEAR(weil_height(ProjPoint(Rational(big, Integer(3)))).value, 400 * std::log(10.0), 1e-9);
}

TEST(LogMaxHeight, Examples) {
  EXPECT_EQ(logmax_height(std::complex<double>(0.5, 0)).value, 0.0);
  EXPECT_DOUBLE_EQ(logmax_height(std::complex<double>(2, 0)).value, std::log(2.0));
  EXPECT_DOUBLE_EQ(logmax_height(std::complex<double>(-3, 4)).value, std::log(5.0));
  EXPECT_THROW(logmax_height(std::complex<double>(INFINITY, 0)), std::invalid_argument);
  EXPECT_THROW(logmax_height(std::complex<double>(0, NAN)), std::invalid_argument);
  EXPECT_NEAR(logmax_height(MpComplex(-3, 4, 128)).value, std::log(5.0), 1e-15);
}

TEST(MahlerMeasure, Examples) {
  EXPECT_NEAR(mahler_measure(IntPoly{-1, 0, 1}).value, 0.0, 1e-12);
  // Oracle: companion-matrix roots +-sqrt2, product of max(1, |r|) = 2.
  EXPECT_NEAR(companion_log_mahler(IntPoly{-2, 0, 1}), std::log(2.0), 1e-12);
  EXPECT_NEAR(mahler_measure(IntPoly{-2, 0, 1}).value, std::log(2.0), 1e-12);
  EXPECT_NEAR(mahler_measure(IntPoly{-3, 2}).value, std::log(3.0), 1e-12);
}

TEST(MahlerMeasure, ConstantAndZero) {
  const auto c = mahler_measure(IntPoly{-5});
  EXPECT_TRUE(c.constant_input);
  EXPECT_DOUBLE_EQ(c.value, std::log(5.0));
  EXPECT_THROW(mahler_measure(IntPoly{}), std::invalid_argument);
}

TEST(MahlerMeasure, ReportsErrorBoundAndCrossCheck) {
  const auto m = mahler_measure(IntPoly{7, -3, 0, 5, 2});
  EXPECT_LT(m.error_bound, 1e-12);
  EXPECT_TRUE(m.graeffe_agrees);
  EXPECT_NEAR(m.value, m.graeffe_value, 1e-9);
  EXPECT_NEAR(m.value, companion_log_mahler(IntPoly{7, -3, 0, 5, 2}), 1e-10);
}

TEST(MahlerMeasure, RepeatedRootsCountWithMultiplicity) {
  const IntPoly p{-3, 1};  // root 3
  const IntPoly q{1, 1, 2};
  const double expected = 3 * std::log(3.0) + mahler_measure(q).value;
  EXPECT_NEAR(mahler_measure(p * p * p * q).value, expected, 1e-12);
}

TEST(MahlerMeasure, UnitCircleInputsHaveZeroHeight) {
  for (int n = 1; n <= 24; ++n) {
    IntPoly p = IntPoly::monomial(1, static_cast<std::size_t>(n)) - IntPoly{1};
    EXPECT_NEAR(mahler_measure(p).value, 0.0, 1e-10) << n;
  }
  // 12th cyclotomic polynomial z^4 - z^2 + 1.
  EXPECT_NEAR(mahler_measure(IntPoly{1, 0, -1, 0, 1}).value, 0.0, 1e-10);
}

TEST(MahlerMeasure, MatchesCompanionOracle) {
  Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    const IntPoly p = random_poly(rng, static_cast<int>(uniform(rng, 1, 10)), 50);
    EXPECT_NEAR(mahler_measure(p).value, companion_log_mahler(p), 1e-8) << to_string(p);
  }
}

TEST(MahlerMeasure, Multiplicative) {
  Rng rng(32);
  for (int t = 0; t < 40; ++t) {
    const IntPoly p = random_poly(rng, static_cast<int>(uniform(rng, 1, 10)), 1000);
    const IntPoly q = random_poly(rng, static_cast<int>(uniform(rng, 1, 10)), 1000);
    EXPECT_NEAR(mahler_measure(p * q).value, mahler_measure(p).value + mahler_measure(q).value, 1e-9);
  }
}

TEST(Graeffe, AgreesWithRootProduct) {
  Rng rng(33);
  for (int t = 0; t < 30; ++t) {
    const IntPoly p = primitive_part(random_poly(rng, static_cast<int>(uniform(rng, 1, 30)), 1000000));
    const auto m = mahler_measure(p);
    const auto g = graeffe_log_mahler(p);
    EXPECT_NEAR(m.value, g.log_mahler, 1e-9) << to_string(p);
    EXPECT_LE(g.steps, 40);
  }
}

TEST(TotalHeight, Examples) {
  const auto h = total_height(AlgSet::from_points({2, -2}));
  EXPECT_NEAR(h.total.value, std::log(4.0), 1e-12);
  EXPECT_NEAR(h.average, weil_height(ProjPoint(2)).value, 1e-12);
  EXPECT_EQ(total_height(AlgSet::infinity_only()).total.value, 0.0);
  const auto q = total_height(AlgSet::from_poly(IntPoly{1, -6, 1}));
  // Oracle: only 3 + 2 sqrt2 lies outside the unit disk.
  EXPECT_NEAR(companion_log_mahler(IntPoly{1, -6, 1}), std::log(3 + 2 * std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(q.total.value, std::log(3 + 2 * std::sqrt(2.0)), 1e-12);
  EXPECT_THROW(total_height(AlgSet()), std::invalid_argument);
}

TEST(TotalHeight, SumOfWeilHeightsForRationalSets) {
  Rng rng(34);
  for (int t = 0; t < 50; ++t) {
    std::set<std::pair<long, long>> seen;
    std::vector<ProjPoint> pts;
    double sum = 0;
    for (int i = 0; i < 5; ++i) {
      const ProjPoint x = random_rational(rng, 40);
      if (!seen.insert({x.value().get_num().get_si(), x.value().get_den().get_si()}).second) continue;
      pts.push_back(x);
      sum += weil_height(x).value;
    }
    EXPECT_NEAR(total_height(AlgSet::from_points(pts)).total.value, sum, 1e-10);
  }
}

TEST(Functoriality, PowerMapsAreExact) {
  const auto& grid = enumerate_rational_points(std::log(50.0));
  for (int d : {1, 2, 3}) {
    const auto est = estimate_functorial_constant(make_polynomial_map(IntPoly::monomial(1, static_cast<std::size_t>(d))), grid);
    EXPECT_EQ(est.c_hat, 0.0) << d;
    EXPECT_EQ(est.sample_count, grid.size());
  }
}

TEST(Functoriality, TranslationBoundedByLogTwo) {
  const auto grid = enumerate_rational_points(std::log(50.0));
  const auto est = estimate_functorial_constant(make_polynomial_map(IntPoly{1, 1}), grid);
  // Oracle: direct scan with doubles.
  double oracle = 0;
  for (long q = 1; q <= 50; ++q)
    for (long p = -50; p <= 50; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const double before = std::log(static_cast<double>(std::max(std::labs(p), q)));
      const double after = std::log(static_cast<double>(std::max(std::labs(p + q), q)));
      oracle = std::max(oracle, std::fabs(after - before));
    }
  EXPECT_NEAR(est.c_hat, oracle, 1e-12);
  EXPECT_LE(est.c_hat, std::log(2.0) + 1e-15);
  EXPECT_THROW(estimate_functorial_constant(make_polynomial_map(IntPoly{1, 1}), {}), std::invalid_argument);
}

TEST(Functoriality, PowerMapHeightIsExactOnRandomPoints) {
  Rng rng(35);
  for (int t = 0; t < 500; ++t) {
    const ProjPoint x = random_rational(rng, 1000000);
    for (int d = 2; d <= 5; ++d) {
      const RationalMap R = make_polynomial_map(IntPoly::monomial(1, static_cast<std::size_t>(d)));
      EXPECT_EQ(naive_height(eval_map(R, x)), pow_int(naive_height(x), static_cast<unsigned long>(d)));
      EXPECT_EQ(height_defect(R, x), 0.0);
    }
  }
}

TEST(Enumerate, Examples) {
  const auto p0 = enumerate_rational_points(0);
  ASSERT_EQ(p0.size(), 4u);
  EXPECT_TRUE(p0[0].is_infinity());
  const std::set<std::string> want0{"inf", "0", "1", "-1"};
  std::set<std::string> got0;
  for (const auto& p : p0) got0.insert(to_string(p));
  EXPECT_EQ(got0, want0);

  const auto p2 = enumerate_rational_points(std::log(2.0));
  const std::set<std::string> want2{"inf", "0", "1", "-1", "2", "-2", "1/2", "-1/2"};
  std::set<std::string> got2;
  for (const auto& p : p2) got2.insert(to_string(p));
  EXPECT_EQ(p2.size(), 8u);
  EXPECT_EQ(got2, want2);

  EXPECT_EQ(enumerate_rational_points(std::log(1.0)).size(), p0.size());
  EXPECT_THROW(enumerate_rational_points(-0.1), std::invalid_argument);
}

TEST(Enumerate, MonotoneAndWithinBound) {
  std::size_t prev = 0;
  for (double b = 0; b <= 3.0; b += 0.1) {
    const auto pts = enumerate_rational_points(b);
    EXPECT_GE(pts.size(), prev);
    prev = pts.size();
    for (const auto& p : pts) EXPECT_LE(weil_height(p).value, b + 1e-12);
  }
}

TEST(Enumerate, MatchesBruteForce) {
  for (double b : {0.0, 0.7, 1.5, 2.3, std::log(50.0)}) {
    const long H = static_cast<long>(std::floor(std::exp(b) + 1e-9));
    std::set<std::string> want{"inf"};
    for (long q = 1; q <= H; ++q)
      for (long p = -H; p <= H; ++p)
        if (std::gcd(p, q) == 1) want.insert(to_string(ProjPoint(Rational(p, q))));
    std::set<std::string> got;
    for (const auto& x : enumerate_rational_points(b)) got.insert(to_string(x));
    EXPECT_EQ(got, want) << "bound " << b;
  }
}
