#include "jetbig/verify.hpp"

#include <gtest/gtest.h>

using namespace jetbig;

namespace {

LeadingForm lf(const Rational& a, const Rational& b) { return {RationalPoly(a), RationalPoly(b)}; }

LeadingForm at_c(const LeadingForm& f, const Rational& c) {
  return lf(f.c1sq.eval({{"c", c}}), f.c2.eval({{"c", c}}));
}

}  // namespace

TEST(Chi3, QuarticAtThree) {
  Rational c(3);
  Rational v = Rational(5, 24) * c * c * c * c - c * c * c + Rational(7, 3) * c * c - Rational(31, 12) * c + Rational(41, 40);
  EXPECT_EQ(v, Rational(249, 60));
  EXPECT_EQ(chi3_leading(3), lf(-1, Rational(249, 60)));
}

TEST(Chi3, RationalCMatchesQuartic) {
  auto sym = chi3_leading_symbolic();
  for (Rational c : {Rational(7, 2), Rational(9, 2), Rational(83, 20)}) EXPECT_EQ(chi3_leading(c), at_c(sym, c)) << c;
}

TEST(Chi3, WeightsFormAgrees) {
  EXPECT_EQ(chi_leading_weights(3, {2, 1}), chi3_leading(3));
  // O_3(3n, n) is the c = 4 member
  EXPECT_EQ(chi_leading_weights(3, {3, 1}), chi3_leading(4));
}

TEST(H2Correction3, RationalCMatchesQuarticAboveFour) {
  auto sym = h2chi_correction_3_symbolic();
  for (Rational c : {Rational(9, 2), Rational(83, 20), Rational(13, 2)}) EXPECT_EQ(h2chi_correction_3(c), at_c(sym, c)) << c;
}

TEST(H2Correction3, QuarticDoesNotReachThree) {
  // the chamber changes below c = 4; at c = 3 the correction is its own value
  EXPECT_NE(h2chi_correction_3(3), at_c(h2chi_correction_3_symbolic(), 3));
}

TEST(Chi4, ZeroWeightsAndX1Route) {
  EXPECT_EQ(chi4_leading({0, 0, 0}), LeadingForm{});
  // pushing one stage further and summing X_1 top terms gives the same leading form
  auto fam = x4_family_on_x1({6, 2, 1});
  auto li = leading_integral(fam.region, {chi_top_term(fam.member).c1sq, chi_top_term(fam.member).c2}, {});
  EXPECT_EQ(lf(li.values[0], li.values[1]), chi4_leading({6, 2, 1}));
}

TEST(H2Correction4, TwistFormsAgree) {
  EXPECT_EQ(h2chi_correction_4(), h2chi_correction_4(Method::Integration, X4Twist::SerreDual));
}

TEST(Assembly, IdentityHoldsForReports) {
  for (long d : {7L, 11L, 15L})
    for (Rational c : {Rational(3), Rational(5), Rational(9, 2)})
      for (auto mode : {RegionMode::Exact, RegionMode::Relaxed}) {
        auto r = report_x3(Rational(d), c, mode);
        auto cn = chern_numbers_surface(d);
        EXPECT_EQ(r.h0_leading, specialize_poly(r.chi_leading + r.h2_chi_correction, cn) - r.curve_correction);
      }
}

TEST(CurveCorrection3, ExactApproachesRelaxedBounds) {
  // the relaxed positive sum runs over a larger set and the negative one over a
  // smaller set, so the relaxed correction dominates the exact one for c = 3
  RationalPoly relaxed = curve_correction_3(std::nullopt, 3, RegionMode::Relaxed);
  for (long d : {9L, 12L, 20L}) {
    Rational exact = curve_correction_3(Rational(d), 3, RegionMode::Exact).constant_value();
    EXPECT_LE(exact, relaxed.eval({{"d", Rational(d)}})) << d;
  }
}

TEST(CurveCorrection3, NeedsDegreeInExactMode) {
  EXPECT_THROW(curve_correction_3(std::nullopt, 3, RegionMode::Exact), std::invalid_argument);
}

TEST(Threshold, Examples) {
  EXPECT_EQ(threshold_find([](long) { return Rational(-1); }), std::nullopt);
  EXPECT_EQ(threshold_find([](long d) { return Rational(d - 7); }), 8);
  // a sign flip above the first positive value moves the threshold up
  EXPECT_EQ(threshold_find([](long d) { return Rational(d == 30 ? -1 : d - 7); }), 31);
}

TEST(Threshold, RelaxedCubicIncreasingFromTwelve) {
  RationalPoly h0 = h0_bound_3(std::nullopt, 3, RegionMode::Relaxed);
  for (long d = 12; d < 60; ++d) EXPECT_LT(h0.eval({{"d", Rational(d)}}), h0.eval({{"d", Rational(d + 1)}})) << d;
}

TEST(YCurve, GridAndWitness) {
  RationalPoly y = h0_bound_3_symbolic_c(11);
  auto rows = y_grid(y, 4, 7, Rational(1, 20));
  ASSERT_EQ(rows.size(), 61u);
  EXPECT_EQ(rows.front().y, Rational(-79805, 88434));
  EXPECT_EQ(rows.back().y, Rational(-8198069, 88434));
  EXPECT_EQ(rows[20].c, Rational(5));
  EXPECT_EQ(rows[20].y, Rational(981871, 88434));
  auto w = find_witness(y);
  ASSERT_TRUE(w);
  EXPECT_GT(w->c, Rational(4));
  EXPECT_LT(w->c, Rational(7));
  EXPECT_GT(w->y, Rational(0));
  EXPECT_THROW(y_grid(y, 7, 4, Rational(1, 20)), std::invalid_argument);
}

TEST(YCurve, DirectValueAtRationalC) {
  RationalPoly y = h0_bound_3_symbolic_c(11);
  Rational c(37, 8);
  EXPECT_EQ(h0_bound_3(Rational(11), c, RegionMode::Exact).constant_value(), y.eval({{"c", c}}));
}

TEST(OptimizeC, ElevenIsTheThreshold) {
  auto ot = threshold_optimize_c();
  ASSERT_TRUE(ot.threshold);
  EXPECT_EQ(*ot.threshold, 11);
  EXPECT_EQ(ot.witness.at(12), Rational(3));
  EXPECT_FALSE(ot.witness.count(10));
}

TEST(Boundary, NoUnclassifiedPiecesInTheFamilies) {
  for (long d : {5L, 9L, 11L, 14L}) {
    for (Rational c : {Rational(3), Rational(5)}) {
      auto counts = classify_family(x3_setup(c).family, {{"n", 12}}, d);
      EXPECT_EQ(counts.boundary, 0u) << "d=" << d << " c=" << c;
    }
    EXPECT_EQ(classify_family(x4_family_on_x1({6, 2, 1}), {{"n", 6}}, d).boundary, 0u);
  }
}

TEST(Report, MachineFormatIsStable) {
  auto a = report_x4(Rational(10), RegionMode::Relaxed).machine();
  auto b = report_x4(Rational(10), RegionMode::Relaxed).machine();
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("h0_leading=597643277740585513/3841542768140000\n"), std::string::npos);
  EXPECT_NE(a.find("tower_level=4\n"), std::string::npos);
}

TEST(Verify, RegistryStatuses) {
  VerifyOptions opt;
  detail::Registry reg(opt);
  RationalPoly x(Rational(3));
  reg.compare("t.pass", x, x);
  reg.compare("t.discrepant", RationalPoly(4), x, std::optional<RationalPoly>(x));
  reg.compare("t.fail", RationalPoly(4), x);
  reg.compare("t.oracle_disagrees", x, x, std::optional<RationalPoly>(RationalPoly(5)));
  auto rows = reg.take();
  EXPECT_EQ(rows[0].status, RowStatus::Pass);
  EXPECT_EQ(rows[1].status, RowStatus::Discrepant);
  EXPECT_EQ(rows[2].status, RowStatus::Fail);
  EXPECT_EQ(rows[3].status, RowStatus::Fail);
}

TEST(Verify, InjectedWrongValueFails) {
  VerifyOptions opt;
  opt.only = {"chi4"};
  opt.inject_wrong = "chi4.21";
  auto res = verify_constants(opt);
  EXPECT_FALSE(res.all_pass());
  // the row has an independent fit, so a wrong reference reads as DISCREPANT
  for (const auto& r : res.rows) EXPECT_EQ(r.status == RowStatus::Discrepant, r.id == "chi4.21") << r.id;
}

TEST(Verify, SubsetSelectsGroups) {
  VerifyOptions opt;
  opt.only = {"ring", "d9"};
  auto res = verify_constants(opt);
  EXPECT_TRUE(res.all_pass());
  for (const auto& r : res.rows) EXPECT_TRUE(r.group() == "ring" || r.group() == "d9") << r.id;
}
