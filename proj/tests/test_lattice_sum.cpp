#include "jetbig/lattice_sum.hpp"
#include "jetbig/polytope.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

using namespace jetbig;

namespace {

RationalPoly v(const char* s) { return RationalPoly::var(s); }

Region triangle() {
  Region r;
  r.between("k", 0, v("n"));
  r.between("l", 0, 3 * v("n") - 3 * v("k"));
  return r;
}

// The curve set at d = 11 for O_3(2n, n).
Region s_region(long d) {
  RationalPoly n = v("n"), k = v("k"), l = v("l");
  RationalPoly p = 4 * k + 3 * l - 3 * n - 2, q = 3 * n - 3 * k - 2 * l + 1;
  Region r = triangle();
  r.at_least(p, 0);
  r.greater(RationalPoly(d - 4) * q - p, RationalPoly(2 * d));
  return r;
}

std::vector<std::vector<int64_t>> points(const Region& r, const Assignment& at) {
  std::vector<std::vector<int64_t>> out;
  enumerate_region(r, at, [&](const std::vector<int64_t>& x) { out.push_back(x); });
  return out;
}

RationalPoly chi3_c1sq_summand() {
  RationalPoly n = v("n"), k = v("k"), l = v("l");
  RationalPoly a = 3 * n - 4 * k - 3 * l, b = k + l;
  return (a * a * a + 3 * a * a * b + 3 * a * b * b) / Rational(6);
}

}  // namespace

TEST(EnumerateRegion, Interval) {
  Region r;
  r.between("k", 0, v("n"));
  EXPECT_EQ(points(r, {{"n", 2}}), (std::vector<std::vector<int64_t>>{{0}, {1}, {2}}));
}

TEST(EnumerateRegion, TriangleAtOne) {
  auto pts = points(triangle(), {{"n", 1}});
  EXPECT_EQ(pts, (std::vector<std::vector<int64_t>>{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}}));
}

TEST(EnumerateRegion, CurveSetAtOneMatchesHandCheck) {
  // 4k + 3l >= 5 and 7q - p > 22 over the five triangle points
  std::vector<std::vector<int64_t>> expect;
  for (auto pt : points(triangle(), {{"n", 1}})) {
    long k = pt[0], l = pt[1];
    long p = 4 * k + 3 * l - 5, q = 4 - 3 * k - 2 * l;
    if (p >= 0 && 7 * q - p > 22) expect.push_back(pt);
  }
  EXPECT_EQ(points(s_region(11), {{"n", 1}}), expect);
}

TEST(EnumerateRegion, StrictConstraintsAreLiteral) {
  Region r;
  r.between("k", 0, 10);
  r.greater(2 * v("k"), 7);  // k >= 4
  r.greater(RationalPoly(9), v("k"));
  EXPECT_EQ(count_points(r, {}), 5u);
}

TEST(EnumerateRegion, EmptyAtSmallN) {
  Region r = triangle();
  r.at_least(v("k"), 5);
  EXPECT_EQ(count_points(r, {{"n", 2}}), 0u);
  EXPECT_EQ(count_points(r, {{"n", 6}}), 4u * 1 + 1u);
}

TEST(EnumerateRegion, NoVariablesIsOnePoint) {
  Region r;
  EXPECT_EQ(count_points(r, {}), 1u);
  r.at_least(RationalPoly(-1), 0);
  EXPECT_EQ(count_points(r, {}), 0u);
  EXPECT_EQ(exact_sum(Region{}, RationalPoly(7), {}), Rational(7));
}

TEST(EnumerateRegion, UnboundedRejected) {
  Region r;
  r.variables = {"k"};
  r.at_least(v("k"), 0);
  EXPECT_THROW(count_points(r, {}), unbounded_region);
}

TEST(EnumerateRegion, MonotoneInN) {
  for (long d : {9L, 11L, 13L}) {
    size_t last = 0;
    for (long n = 0; n <= 30; ++n) {
      size_t c = count_points(s_region(d), {{"n", Rational(n)}});
      EXPECT_GE(c, last) << "d=" << d << " n=" << n;
      last = c;
    }
  }
}

TEST(ExactSum, Examples) {
  Region r;
  r.between("k", 0, v("n"));
  EXPECT_EQ(exact_sum(r, RationalPoly(1), {{"n", 5}}), Rational(6));
  EXPECT_EQ(exact_sum(r, v("k") * v("k") * v("k"), {{"n", 4}}), Rational(100));
}

TEST(ExactSum, AgreesWithEnumeration) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> coef(-9, 9);
  RationalPoly k = v("k"), l = v("l"), n = v("n");
  for (int t = 0; t < 10; ++t) {
    RationalPoly f = coef(rng) * k * k * l + coef(rng) * l * l * l + coef(rng) * n * k + RationalPoly(Rational(coef(rng), 7));
    for (long d : {9L, 12L})
      for (long nn : {0L, 3L, 17L, 40L}) {
        Assignment at{{"n", Rational(nn)}};
        EXPECT_EQ(exact_sum(s_region(d), f, at), brute_force_sum(s_region(d), f, at));
      }
  }
}

TEST(ExactSum, LinearInSummand) {
  RationalPoly k = v("k"), l = v("l");
  RationalPoly f = k * k * l, g = l * l - 3 * k;
  Assignment at{{"n", 13}};
  Region r = s_region(10);
  EXPECT_EQ(exact_sum(r, 2 * f + g * Rational(3, 5), at),
            2 * exact_sum(r, f, at) + exact_sum(r, g, at) * Rational(3, 5));
}

TEST(ExactSum, LargeValuesFallBackToMultiprecision) {
  Region r;
  r.between("k", 0, v("n"));
  RationalPoly k = v("k");
  RationalPoly f = k * k * k * k * k * k * k * k * k * k * k * k;
  Assignment at{{"n", 200000}};
  EXPECT_EQ(exact_sum(r, f, at), brute_force_sum(r, f, at));
}

TEST(QuasiPolyTest, BranchSelection) {
  RationalPoly n = v("n");
  QuasiPoly q;
  q.period = 2;
  q.branches = {n * n / Rational(2), (n * n - 1) / Rational(2)};
  EXPECT_EQ(q.eval(4), Rational(8));
  EXPECT_EQ(q.eval(5), Rational(12));
  EXPECT_EQ(q.leading_coefficient(2), Rational(1, 2));
  EXPECT_THROW(q.leading_coefficient(0), fit_failure);
}

TEST(QuasiPolyTest, DisagreeingLeadingThrows) {
  RationalPoly n = v("n");
  QuasiPoly q;
  q.period = 2;
  q.branches = {n * n, 2 * n * n};
  EXPECT_THROW(q.leading_coefficient(2), fit_failure);
}

TEST(PeriodBound, TriangleAndFloors) {
  EXPECT_EQ(period_bound(triangle(), {}), 1);
  Region r;
  r.between("k", 0, v("n"));
  r.at_least(3 * v("n") - 4 * v("k"), 0);  // vertex k = 3n/4
  EXPECT_EQ(period_bound(r, {}) % 4, 0);
}

TEST(FitClosedForm, ConstantOverInterval) {
  Region r;
  r.between("k", 0, v("n"));
  FitOptions opt;
  opt.degree = 1;
  auto cf = fit_closed_form(r, {RationalPoly(1)}, {}, opt);
  EXPECT_EQ(cf.period, 1);
  EXPECT_EQ(cf.forms[0].branch(0), v("n") + 1);
}

TEST(FitClosedForm, FloorRegionHasPeriod) {
  Region r;
  r.between("k", 0, v("n"));
  r.at_least(v("n") - 2 * v("k"), 0);  // k <= n/2
  FitOptions opt;
  opt.degree = 1;
  auto cf = fit_closed_form(r, {RationalPoly(1)}, {}, opt);
  EXPECT_EQ(cf.period, 2);
  EXPECT_EQ(cf.leading[0], Rational(1, 2));
  for (long n = 0; n <= 15; ++n) EXPECT_EQ(cf.forms[0].eval(n), Rational(n / 2 + 1));
}

TEST(FitClosedForm, ChiSummandMatchesHeldOutEnumeration) {
  FitOptions opt;
  opt.degree = 5;
  auto cf = fit_closed_form(triangle(), {chi3_c1sq_summand()}, {}, opt);
  EXPECT_EQ(cf.period, 1);
  EXPECT_EQ(cf.leading[0], Rational(-1));
  for (long n : {6L, 25L, 31L})
    EXPECT_EQ(cf.forms[0].eval(n), brute_force_sum(triangle(), chi3_c1sq_summand(), {{"n", Rational(n)}}));
}

TEST(FitClosedForm, WrongDegreeFails) {
  Region r;
  r.between("k", 0, v("n"));
  FitOptions opt;
  opt.degree = 2;
  opt.max_period = 3;
  EXPECT_THROW(fit_closed_form(r, {v("k") * v("k") * v("k")}, {}, opt), fit_failure);
}

TEST(FitClosedForm, CsvDump) {
  Region r;
  r.between("k", 0, v("n"));
  FitOptions opt;
  opt.degree = 1;
  opt.csv_path = ::testing::TempDir() + "jetbig_fit.csv";
  fit_closed_form(r, {RationalPoly(1)}, {}, opt);
  std::ifstream in(opt.csv_path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "n,value0");
  EXPECT_EQ(row, "3,4/1");
  std::remove(opt.csv_path.c_str());
}

TEST(LeadingIntegral, MatchesFitOnTriangle) {
  auto li = leading_integral(triangle(), {chi3_c1sq_summand(), RationalPoly(1)}, {});
  EXPECT_EQ(li.values[0], Rational(-1));
  EXPECT_EQ(li.degrees[0], 5);
  EXPECT_EQ(li.values[1], Rational(3, 2));
  EXPECT_EQ(li.degrees[1], 2);
}

TEST(LeadingIntegral, StrictAndNonStrictAgree) {
  Region a = triangle(), b = triangle();
  a.at_least(4 * v("k") + 3 * v("l") - 3 * v("n"), 0);
  b.greater(4 * v("k") + 3 * v("l") - 3 * v("n") - 2, 0);
  auto f = v("k") * v("l");
  EXPECT_EQ(leading_integral(a, {f}, {}).values, leading_integral(b, {f}, {}).values);
}

TEST(LeadingIntegral, InfeasibleIsZero) {
  Region r = triangle();
  r.at_least(-v("n") - 1, 0);
  auto li = leading_integral(r, {v("k")}, {});
  EXPECT_EQ(li.values[0], Rational(0));
  EXPECT_EQ(li.degrees[0], 3);
}

TEST(LeadingIntegral, AgreesWithFitOnFloorRegion) {
  Region r = triangle();
  r.at_least(4 * v("k") + 3 * v("l") - 3 * v("n") - 2, 0);
  RationalPoly p = 4 * v("k") + 3 * v("l") - 3 * v("n") - 2;
  FitOptions opt;
  opt.degree = 5;
  auto cf = fit_closed_form(r, {p * p * p}, {}, opt);
  EXPECT_EQ(leading_integral(r, {p * p * p}, {}).values[0], cf.leading[0]);
}
