// End-to-end acceptance checks, one test per criterion. Every comparison is
// exact unless a tolerance constant says otherwise. A listener prints one
// summary line per criterion.

#include "jetbig/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>

using namespace jetbig;

namespace {

constexpr double kD9Tolerance = 5e-8;
constexpr double kD9Reference = -304.5398797;

RationalPoly v(const char* s) { return RationalPoly::var(s); }
LeadingForm lf(const Rational& a, const Rational& b) { return {RationalPoly(a), RationalPoly(b)}; }

RationalPoly quartic(const std::vector<Rational>& coef, const char* var = "c") {
  RationalPoly x = v(var), out;
  for (const auto& a : coef) out = out * x + RationalPoly(a);
  return out;
}

const LeadingForm kChi3 = lf(-1, Rational(249, 60));
const LeadingForm kH2c3 = lf(Rational(2013, 1536), Rational(-2073, 480));

/// Fits both coefficients of a leading form's sum on nodes [first, first + degree]
/// and checks every later point up to `last`, all from exact sums.
LeadingForm fit_on_window(const Region& region, const LeadingForm& summand, int degree, long first, long last) {
  std::vector<std::vector<std::pair<Rational, Rational>>> pts(2);
  for (long n = first; n <= last; ++n) {
    auto vals = exact_sum(region, {summand.c1sq, summand.c2}, {{"n", Rational(n)}});
    for (size_t i = 0; i < 2; ++i) pts[i].emplace_back(Rational(n), vals[i]);
  }
  LeadingForm out;
  for (size_t i = 0; i < 2; ++i) {
    std::vector<std::pair<Rational, Rational>> nodes(pts[i].begin(), pts[i].begin() + degree + 1);
    RationalPoly p = fit_univariate(nodes, degree);
    for (const auto& [n, val] : pts[i]) EXPECT_EQ(p.eval({{"n", n}}), val) << "held-out n=" << n;
    (i == 0 ? out.c1sq : out.c2) = RationalPoly(p.coefficient("n", degree).constant_value());
  }
  return out;
}

/// Every branch of a fitted form checked against plain enumeration at two n
/// beyond the sampled window.
void check_branches_by_enumeration(const Region& region, const std::vector<RationalPoly>& summands,
                                   const ClosedForm& cf) {
  long past = cf.n0 + cf.period * (cf.degree + 3);
  for (long r = 0; r < cf.period; ++r)
    for (long extra : {0L, 1L}) {
      long n = past + r + cf.period * extra;
      for (size_t s = 0; s < summands.size(); ++s)
        EXPECT_EQ(cf.forms[s].eval(n), brute_force_sum(region, summands[s], {{"n", Rational(n)}}))
            << "branch " << r << " n=" << n;
    }
}

class CriterionPrinter : public ::testing::EmptyTestEventListener {
  void OnTestEnd(const ::testing::TestInfo& info) override {
    const auto* r = info.result();
    std::printf("criterion %-28s %s  (%.2f s)\n", info.name(), r->Passed() ? "PASS" : "FAIL",
                static_cast<double>(r->elapsed_time()) / 1000.0);
    std::fflush(stdout);
  }
};

}  // namespace

TEST(Acceptance, C01_ChiX3) {
  auto x = x3_setup(3);
  auto top = chi_top_term(x.family.member);
  EXPECT_EQ(fit_on_window(x.family.region, top, 5, 15, 23), kChi3);  // nodes 15..20, checks 21..23
  EXPECT_EQ(chi3_leading(3), kChi3);
}

TEST(Acceptance, C02_ChiX3GeneralC) {
  LeadingForm ref{-quartic({Rational(1, 24), Rational(-1, 6), Rational(1, 3), Rational(-1, 3), Rational(1, 8)}),
                  quartic({Rational(5, 24), -1, Rational(7, 3), Rational(-31, 12), Rational(41, 40)})};
  LeadingForm sym = chi3_leading_symbolic(Method::Fit);  // c = 5..10, c = 10 held out
  EXPECT_EQ(sym, ref);
  EXPECT_EQ(chi3_leading_symbolic(Method::Integration), ref);
  EXPECT_EQ(lf(sym.c1sq.eval({{"c", 3}}), sym.c2.eval({{"c", 3}})), kChi3);
}

TEST(Acceptance, C03_H2CorrectionX3) {
  long period = 0;
  EXPECT_EQ(h2chi_correction_3(3, Method::Fit, &period), kH2c3);
  EXPECT_GT(period, 1) << "the c = 3 region has a floor at k = (3n + 2)/4";
  EXPECT_EQ(h2chi_correction_3(3), kH2c3);
  LeadingForm f_ref{quartic({Rational(5, 81), Rational(-47, 162), Rational(229, 324), Rational(-145, 162), Rational(305, 648)}),
                    quartic({Rational(-2, 9), Rational(10, 9), Rational(-25, 9), Rational(125, 36), Rational(-125, 72)})};
  EXPECT_EQ(h2chi_correction_3_symbolic(Method::Fit), f_ref);
  EXPECT_EQ(h2chi_correction_3_symbolic(Method::Integration), f_ref);
}

TEST(Acceptance, C04_AssemblyIdentity) {
  EXPECT_EQ(kChi3 + kH2c3, lf(Rational(159, 512), Rational(-27, 160)));
  EXPECT_EQ(chi3_leading(3) + h2chi_correction_3(3), lf(Rational(159, 512), Rational(-27, 160)));
}

TEST(Acceptance, C05_RelaxedCubicX3) {
  RationalPoly d = v("d");
  RationalPoly ref = d * (Rational(33, 320) * d * d - Rational(359523951, 240100000) * d + Rational(799455603, 240100000));
  // numeric-d pipeline on d = 13..17, cubic fit with d = 18 held out
  std::map<GridPoint, Rational> grid;
  for (long dd = 13; dd <= 18; ++dd)
    grid[{Rational(dd)}] = h0_bound_3(Rational(dd), 3, RegionMode::Relaxed).constant_value();
  RationalPoly fitted = fit_multiparameter(grid, {{"d", 4}}, false);
  EXPECT_EQ(fitted.coefficient("d", 4), RationalPoly(0));
  EXPECT_EQ(fitted, ref);
  EXPECT_EQ(h0_bound_3(std::nullopt, 3, RegionMode::Relaxed), ref);
  auto at = [&](long dd) { return fitted.eval({{"d", Rational(dd)}}); };
  EXPECT_EQ(threshold_find(at), 12);
  EXPECT_LT(at(11), Rational(0));
}

TEST(Acceptance, C06_CurveSumD11) {
  RationalPoly ref = quartic({1, -2, 2, -1, Rational(1, 5)}) * Rational(290521, 795906);
  EXPECT_EQ(curve_correction_3_symbolic_c(11, CurveLBound::FamilyBound), ref);
  bool literal_matches = false;
  try {
    literal_matches = curve_correction_3_symbolic_c(11, CurveLBound::Literal) == ref;
  } catch (const fit_failure&) {
  }
  EXPECT_FALSE(literal_matches);
  std::printf("  l-bound reproducing the d = 11 quartic: l <= cn - 3k (l <= 3n - 3k %s)\n",
              literal_matches ? "also matches" : "does not");
}

TEST(Acceptance, C07_YCurve) {
  RationalPoly ref = quartic({Rational(-394823, 4), 1575508, Rational(-36295897, 4), 22513040, Rational(-40944629, 2)}) *
                     Rational(1, 44217);
  RationalPoly y = h0_bound_3_symbolic_c(11);
  EXPECT_EQ(y, ref);
  EXPECT_EQ(y.eval({{"c", 5}}), Rational(981871, 88434));
  auto w = find_witness(y);
  ASSERT_TRUE(w.has_value());
  EXPECT_GT(w->y, Rational(0));
  EXPECT_EQ(h0_bound_3(Rational(11), w->c, RegionMode::Exact).constant_value(), w->y);
  std::printf("  witness c = %s, y = %s\n", w->c.str().c_str(), w->y.decimal(6).c_str());
}

TEST(Acceptance, C08_ChiX4) {
  auto fam = x4_family_on_x2({6, 2, 1});
  EXPECT_EQ(fit_on_window(fam.region, chi_top_term(fam.member), 6, 12, 20), lf(Rational(-1213, 12), Rational(23629, 60)));
  auto fam21 = x4_family_on_x2({2, 1});
  EXPECT_EQ(fit_on_window(fam21.region, chi_top_term(fam21.member), 6, 12, 20), lf(Rational(1, 6), Rational(-61, 30)));
  EXPECT_EQ(chi4_leading({6, 2, 1}), lf(Rational(-1213, 12), Rational(23629, 60)));
}

TEST(Acceptance, C09_H2CorrectionX4) {
  LeadingForm ref = lf(Rational(3617245553, 28449792), Rational(-8184073, 20160));
  auto r1 = r1_family(x4_family_on_x1({6, 2, 1}));
  auto top = surface_sym_chi_top(r1.p, r1.q);
  FitOptions opt;
  opt.degree = 6;
  auto cf = fit_closed_form(r1.region, {top.c1sq, top.c2}, {}, opt);
  EXPECT_EQ(lf(cf.leading[0], cf.leading[1]), ref);
  EXPECT_EQ(h2chi_correction_4(), ref);
  // triple sums by plain enumeration, at n outside the sampled window
  for (long n : {13L, 17L})
    for (size_t s = 0; s < 2; ++s)
      EXPECT_EQ(cf.forms[s].eval(n), brute_force_sum(r1.region, s == 0 ? top.c1sq : top.c2, {{"n", Rational(n)}})) << n;
  std::printf("  period %ld (bound %ld), %zu samples, %zu held-out checks\n", cf.period, cf.period_bound, cf.samples,
              cf.held_out_checks);
}

TEST(Acceptance, C10_X4Cubic) {
  RationalPoly d = v("d");
  RationalPoly ref = d * (Rational(18461, 1920) * d * d -
                          Rational(mpz_class("41723445050414378269"), mpz_class("345738849132600000")) * d +
                          Rational(mpz_class("90181735116469021057"), mpz_class("345738849132600000")));
  RationalPoly f = h0_bound_4(std::nullopt, RegionMode::Relaxed);
  EXPECT_EQ(f, ref);
  for (long dd : {10L, 13L}) EXPECT_EQ(h0_bound_4(Rational(dd), RegionMode::Relaxed), RationalPoly(ref.eval({{"d", Rational(dd)}})));
  EXPECT_EQ(threshold_find([&](long dd) { return f.eval({{"d", Rational(dd)}}); }), 10);
}

TEST(Acceptance, C11_D9Remark) {
  Rational val = h0_bound_4(Rational(9), RegionMode::Exact).constant_value();
  EXPECT_LE(std::fabs(val.raw().get_d() - kD9Reference), kD9Tolerance) << val.decimal(12);
  std::printf("  exact value %s ~ %s\n", val.str().c_str(), val.decimal(10).c_str());
}

TEST(Acceptance, C12_RingProperties) {
  for (int j = 1; j <= 4; ++j) {
    auto [a, b] = relation_classes(j);
    CohomClass u = CohomClass::u(j);
    EXPECT_TRUE(reduce(u * u + a * u + b).is_zero()) << j;
  }
  CohomClass u = CohomClass::u(1), c1 = CohomClass::c1(0), c2 = CohomClass::c2(0);
  EXPECT_EQ(integrate(u * u * u), lf(1, -1));
  EXPECT_EQ(integrate(u * u * c1), lf(-1, 0));
  EXPECT_EQ(integrate(u * c1 * c1), lf(1, 0));
  EXPECT_EQ(integrate(u * c2), lf(0, 1));
  RationalPoly n = v("n"), k = v("k"), l = v("l");
  RationalPoly P = 9 * n - 4 * k - 3 * l, Q = k + l;
  auto spec = LineBundleSpec::det_dual(1, 2).power(Q);
  spec.weights[1] += P;
  auto top = chi_top_term(spec);
  EXPECT_EQ((top.c2 + top.c1sq) * Rational(24), 4 * P * P * P * P + 8 * P * P * P * Q);
  for (long d = 1; d <= 60; ++d) EXPECT_TRUE(chern_numbers_surface(d).noether_integral()) << d;
}

TEST(Acceptance, C13_OracleSuite) {
  FitOptions opt;
  opt.degree = 5;
  auto x = x3_setup(3);
  auto chi = chi_top_term(x.family.member);
  auto cf = fit_closed_form(x.family.region, {chi.c1sq, chi.c2}, {}, opt);
  check_branches_by_enumeration(x.family.region, {chi.c1sq, chi.c2}, cf);

  auto r1 = r1_family(x.family);
  auto h2 = surface_sym_chi_top(r1.p, r1.q);
  auto cf2 = fit_closed_form(r1.region, {h2.c1sq, h2.c2}, {}, opt);
  EXPECT_GT(cf2.period, 1);
  check_branches_by_enumeration(r1.region, {h2.c1sq, h2.c2}, cf2);

  // relaxed curve sum over q > 0 with p > 0
  Region big = r1.region;
  big.greater(r1.p, 0);
  big.greater(r1.q, 0);
  RationalPoly t1 = r1.p * r1.q * (r1.p + r1.q) / Rational(2);
  auto cf3 = fit_closed_form(big, {t1}, {}, opt);
  check_branches_by_enumeration(big, {t1}, cf3);
  EXPECT_EQ(cf3.leading[0], leading_integral(big, {t1}, {}).values[0]);

  opt.degree = 6;
  auto fam = x4_family_on_x2({2, 1});
  auto chi4 = chi_top_term(fam.member);
  auto cf4 = fit_closed_form(fam.region, {chi4.c1sq, chi4.c2}, {}, opt);
  check_branches_by_enumeration(fam.region, {chi4.c1sq, chi4.c2}, cf4);

  // interpolation round trips on random polynomials
  std::mt19937 rng(2024);
  std::uniform_int_distribution<long> coef(-50, 50);
  for (int t = 0; t < 20; ++t) {
    RationalPoly p;
    for (int e = 0; e <= 6; ++e) p += RationalPoly(Rational(coef(rng), 1 + (coef(rng) + 50) % 7)) * v("n").pow(e);
    std::vector<std::pair<Rational, Rational>> pts;
    for (long n = -3; n <= 5; ++n) pts.emplace_back(Rational(n), p.eval({{"n", Rational(n)}}));
    EXPECT_EQ(fit_univariate(pts, 6), p);
    std::map<GridPoint, Rational> grid;
    RationalPoly q = p.substitute({{"n", v("c") + 2 * v("d")}});
    for (long c = 0; c <= 7; ++c)
      for (long d = 0; d <= 7; ++d) grid[{Rational(c), Rational(d)}] = q.eval({{"c", Rational(c)}, {"d", Rational(d)}});
    EXPECT_EQ(fit_multiparameter(grid, {{"c", 6}, {"d", 6}}), q);
  }
}

TEST(Acceptance, C14_Determinism) {
  auto a = verify_constants().machine();
  auto b = verify_constants().machine();
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.empty());
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(new CriterionPrinter);
  return RUN_ALL_TESTS();
}
