#include "jetbig/interpolate.hpp"

#include <gtest/gtest.h>

#include <random>

using jetbig::fit_failure;
using jetbig::Rational;
using jetbig::RationalPoly;

TEST(FitUnivariate, Constant) {
  auto p = jetbig::fit_univariate({{0, 5}, {1, 5}, {2, 5}}, 2);
  EXPECT_EQ(p, RationalPoly(5));
}

TEST(FitUnivariate, SumOfCubes) {
  std::vector<std::pair<Rational, Rational>> s;
  long acc = 0;
  for (long n = 0; n <= 4; ++n) {
    acc += n * n * n;
    s.emplace_back(n, acc);
  }
  RationalPoly n = RationalPoly::var("n");
  EXPECT_EQ(jetbig::fit_univariate(s, 4), n * n * (n + 1) * (n + 1) / Rational(4));
}

TEST(FitUnivariate, TriangleCountAgainstBruteForce) {
  auto count = [](long n) {
    long c = 0;
    for (long k = 0; k <= n; ++k)
      for (long l = 0; l <= 3 * n - 3 * k; ++l) ++c;
    return c;
  };
  std::vector<std::pair<Rational, Rational>> s;
  for (long n = 0; n <= 2; ++n) s.emplace_back(n, count(n));
  RationalPoly p = jetbig::fit_univariate(s, 2);
  RationalPoly n = RationalPoly::var("n");
  EXPECT_EQ(p, (3 * n * n + 5 * n + 2) / Rational(2));
  EXPECT_EQ(p.eval({{"n", 5}}), Rational(count(5)));
}

TEST(FitUnivariate, ExtraSampleMismatchIsFitFailure) {
  EXPECT_THROW(jetbig::fit_univariate({{0, 0}, {1, 1}, {2, 4}}, 1), fit_failure);
}

TEST(FitUnivariate, DegenerateInputs) {
  EXPECT_THROW(jetbig::fit_univariate({}, 2), std::invalid_argument);
  EXPECT_THROW(jetbig::fit_univariate({{0, 1}}, 2), std::invalid_argument);
  EXPECT_THROW(jetbig::fit_univariate({{0, 1}, {0, 1}}, 1), std::invalid_argument);
}

TEST(FitUnivariateProperty, RoundTrip) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coef(-20, 20), den(1, 9), deg(0, 7);
  RationalPoly n = RationalPoly::var("n");
  for (int trial = 0; trial < 100; ++trial) {
    int d = deg(rng);
    RationalPoly p;
    for (int e = 0; e <= d; ++e) p += Rational(coef(rng), den(rng)) * n.pow(static_cast<unsigned>(e));
    std::vector<std::pair<Rational, Rational>> s;
    for (long x = -3; x < -3 + d + 3; ++x) s.emplace_back(x, p.eval({{"n", x}}));
    ASSERT_EQ(jetbig::fit_univariate(s, d), p);
  }
}

TEST(FitMultiparameter, Monomial) {
  std::map<jetbig::GridPoint, Rational> grid;
  for (long c : {1, 2, 3})
    for (long n : {0, 1, 2}) grid[{c, n}] = Rational(c * n);
  auto p = jetbig::fit_multiparameter(grid, {{"c", 1}, {"n", 1}});
  EXPECT_EQ(p, RationalPoly::var("c") * RationalPoly::var("n"));
}

TEST(FitMultiparameter, QuarticInC) {
  RationalPoly c = RationalPoly::var("c");
  RationalPoly f2 = Rational(-2, 9) * c.pow(4) + Rational(10, 9) * c.pow(3) - Rational(25, 9) * c * c +
                    Rational(125, 36) * c - Rational(125, 72);
  std::map<jetbig::GridPoint, Rational> grid;
  for (long v = 5; v <= 10; ++v) grid[{v}] = f2.eval({{"c", v}});
  EXPECT_EQ(jetbig::fit_multiparameter(grid, {{"c", 4}}), f2);
  grid[{11}] += Rational(1);
  EXPECT_THROW(jetbig::fit_multiparameter(grid, {{"c", 4}}), fit_failure);
}

TEST(FitMultiparameter, BivariateLatticeSum) {
  // sum_{k=0}^{n} sum_{l=0}^{cn-3k} (k + l): degree 3 in n, 2 in c
  auto direct = [](long n, long c) {
    long s = 0;
    for (long k = 0; k <= n; ++k)
      for (long l = 0; l <= c * n - 3 * k; ++l) s += k + l;
    return s;
  };
  std::map<jetbig::GridPoint, Rational> grid;
  for (long n = 0; n <= 4; ++n)
    for (long c = 3; c <= 6; ++c) grid[{n, c}] = Rational(direct(n, c));
  auto p = jetbig::fit_multiparameter(grid, {{"n", 3}, {"c", 2}});
  EXPECT_EQ(p.eval({{"n", 9}, {"c", 7}}), Rational(direct(9, 7)));
}

TEST(FitMultiparameter, RequiresHoldout) {
  std::map<jetbig::GridPoint, Rational> grid;
  for (long c : {1, 2})
    for (long n : {0, 1}) grid[{c, n}] = Rational(c * n);
  EXPECT_THROW(jetbig::fit_multiparameter(grid, {{"c", 1}, {"n", 1}}), std::invalid_argument);
  EXPECT_EQ(jetbig::fit_multiparameter(grid, {{"c", 1}, {"n", 1}}, false),
            RationalPoly::var("c") * RationalPoly::var("n"));
}
