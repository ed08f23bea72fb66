#pragma once

#include "jetbig/lattice_sum.hpp"
#include "jetbig/polytope.hpp"
#include "jetbig/riemann_roch.hpp"

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace jetbig {

/// exact: the summation sets as stated, including the curve-semistability bound.
/// relaxed: the enlarged set for the positive curve term and the shrunk set for
/// the negative one, which makes the curve sums independent of d.
enum class RegionMode { Exact, Relaxed };

/// How leading coefficients in n are obtained.
enum class Method { Integration, Fit };

/// l-bound of the curve set for the O_3((c-1)n, n) family.
enum class CurveLBound { FamilyBound, Literal };  // l <= cn - 3k, or l <= 3n - 3k

inline const char* to_string(RegionMode m) { return m == RegionMode::Exact ? "exact" : "relaxed"; }
inline const char* to_string(Method m) { return m == Method::Integration ? "integration" : "fit"; }
inline const char* to_string(CurveLBound b) { return b == CurveLBound::FamilyBound ? "cn-3k" : "3n-3k"; }

namespace detail {

inline RationalPoly sym(const char* name) { return RationalPoly::var(name); }

/// Coefficient of n^degree of the sums of several summands over a region.
struct LeadingSums {
  std::vector<Rational> values;
  int degree = 0;
  long period = 1;  // detected quasi-period (fit only)
};

inline LeadingSums leading_sums(const Region& region, const std::vector<RationalPoly>& summands,
                                const Assignment& params, Method method, long max_period = 0) {
  auto li = leading_integral(region, summands, params);
  int degree = *std::max_element(li.degrees.begin(), li.degrees.end());
  if (method == Method::Integration) return {li.values, degree, 1};
  FitOptions opt;
  opt.degree = degree;
  opt.max_period = max_period;
  auto cf = fit_closed_form(region, summands, params, opt);
  return {cf.leading, degree, cf.period};
}

inline LeadingForm leading_form_sum(const Region& region, const LeadingForm& summand, const Assignment& params,
                                    Method method, long* period = nullptr) {
  auto r = leading_sums(region, {summand.c1sq, summand.c2}, params, method);
  if (period) *period = r.period;
  return {RationalPoly(r.values[0]), RationalPoly(r.values[1])};
}

/// Samples f at c = 5..10 and fits a quartic in c; c = 10 is held out.
inline RationalPoly quartic_in_c(const std::function<Rational(long)>& f) {
  std::map<GridPoint, Rational> grid;
  for (long c = 5; c <= 10; ++c) grid[{Rational(c)}] = f(c);
  return fit_multiparameter(grid, {{"c", 4}});
}

inline LeadingForm quartic_form_in_c(const std::function<LeadingForm(long)>& f) {
  std::map<long, LeadingForm> cache;
  auto get = [&](long c) -> const LeadingForm& {
    auto it = cache.find(c);
    if (it == cache.end()) it = cache.emplace(c, f(c)).first;
    return it->second;
  };
  return {quartic_in_c([&](long c) { return get(c).c1sq.constant_value(); }),
          quartic_in_c([&](long c) { return get(c).c2.constant_value(); })};
}

}  // namespace detail

// ---------------------------------------------------------------- X_3

/// O_3((c-1)n, n) pushed to X_1: indices (k, l), members O_1(cn - 4k - 3l) (x) K^(k+l).
inline GradedFamily x3_family(const RationalPoly& c) {
  RationalPoly n = detail::sym("n");
  Assignment fixed;
  if (c.is_constant()) fixed["c"] = c.constant_value();
  return push_to_base_family(3, {(c - 1) * n, n}, 1, fixed);
}

/// For c = a/b the bundle at n = b*m is O_3((a-b)m, bm), so rational c runs
/// with m as the twisting parameter and n^5 coefficients pick up b^-5.
struct X3Setup {
  GradedFamily family;
  Rational scale;
  long b = 1;
};

inline X3Setup x3_setup(const Rational& c) {
  long a = Rational(c.num()).to_long(), b = Rational(c.den()).to_long();
  RationalPoly n = detail::sym("n");
  Rational b5 = Rational(b) * Rational(b) * Rational(b) * Rational(b) * Rational(b);
  return {push_to_base_family(3, {RationalPoly(a - b) * n, RationalPoly(b) * n}), Rational(1) / b5, b};
}

inline LeadingForm scaled(const LeadingForm& f, const Rational& s) { return {f.c1sq * s, f.c2 * s}; }

inline LeadingForm chi3_leading(const Rational& c, Method method = Method::Integration, long* period = nullptr) {
  auto x = x3_setup(c);
  return scaled(detail::leading_form_sum(x.family.region, chi_top_term(x.family.member), {}, method, period), x.scale);
}

/// Quartics in c, fitted over c = 5..10.
inline LeadingForm chi3_leading_symbolic(Method method = Method::Integration) {
  return detail::quartic_form_in_c([&](long c) { return chi3_leading(Rational(c), method); });
}

/// Pieces O_1(s) (x) K^e with s <= -2 contribute h^2 = h^1(S^p T^* (x) K^q) with
/// p = -s - 2, q = e + s + 1; their chi, summed, corrects the leading term.
struct R1Family {
  Region region;
  RationalPoly p, q;
};

inline R1Family r1_family(const GradedFamily& fam) {
  RationalPoly s = fam.member.weights.front();
  RationalPoly e = fam.member.kx_exponent;
  R1Family out{fam.region, -s - 2, e + s + 1};
  out.region.at_least(out.p, 0);
  return out;
}

inline LeadingForm h2chi_correction_3(const Rational& c, Method method = Method::Integration, long* period = nullptr) {
  auto x = x3_setup(c);
  auto r1 = r1_family(x.family);
  return scaled(detail::leading_form_sum(r1.region, surface_sym_chi_top(r1.p, r1.q), {}, method, period), x.scale);
}

inline LeadingForm h2chi_correction_3_symbolic(Method method = Method::Integration) {
  return detail::quartic_form_in_c([&](long c) { return h2chi_correction_3(Rational(c), method); });
}

/// The R1 pieces of O_3((c-1)n, n) (p >= 0); the curve sums run over p > 0.
inline R1Family x3_curve_base(const X3Setup& x, CurveLBound lbound) {
  auto r1 = r1_family(x.family);
  if (lbound == CurveLBound::Literal) {
    RationalPoly n = detail::sym("n"), k = detail::sym("k");
    Region lit;
    lit.between("k", 0, RationalPoly(x.b) * n);
    lit.between("l", 0, RationalPoly(3 * x.b) * n - 3 * k);
    lit.at_least(r1.p, 0);
    r1.region = lit;
  }
  return r1;
}

/// Leading n^5 coefficient of the curve-restriction sum subtracted from the
/// chi bound. Exact mode needs a numeric d; relaxed mode returns a polynomial in d.
inline RationalPoly curve_correction_3(const std::optional<Rational>& d, const Rational& c, RegionMode mode,
                                       CurveLBound lbound = CurveLBound::FamilyBound,
                                       Method method = Method::Integration) {
  auto x = x3_setup(c);
  auto base = x3_curve_base(x, lbound);
  base.region.greater(base.p, 0);  // p = 0 pieces contribute nothing at leading order
  const RationalPoly& p = base.p;
  const RationalPoly& q = base.q;
  RationalPoly half(Rational(1, 2));
  if (mode == RegionMode::Exact) {
    if (!d) throw std::invalid_argument("exact curve region needs a numeric degree");
    RationalPoly dd(*d);
    Region s = base.region;
    s.greater((dd - 4) * q - p, 2 * dd);
    auto r = detail::leading_sums(s, {curve_chi_leading(p, q, dd)}, {}, method);
    return RationalPoly(r.values[0] * x.scale);
  }
  Region big = base.region, small = base.region;
  big.greater(q, 0);
  small.at_least(q, p);
  auto t1 = detail::leading_sums(big, {p * q * (p + q) * half}, {}, method).values[0] * x.scale;
  auto t2 = detail::leading_sums(small, {p * p * p * half}, {}, method).values[0] * x.scale;
  RationalPoly dv = d ? RationalPoly(*d) : detail::sym("d");
  return dv * (dv - 4) * (dv - 4) * t1 - dv * (dv - 3) * t2;
}

/// Exact-mode curve correction as a quartic in c (fitted over c = 5..10).
inline RationalPoly curve_correction_3_symbolic_c(const Rational& d, CurveLBound lbound = CurveLBound::FamilyBound) {
  return detail::quartic_in_c([&](long c) {
    return curve_correction_3(d, Rational(c), RegionMode::Exact, lbound).constant_value();
  });
}

/// h^0 leading coefficient bound: specialize(chi + h2 correction, d) - curve correction.
inline RationalPoly assemble_h0(const LeadingForm& chi, const LeadingForm& h2, const std::optional<Rational>& d,
                                const RationalPoly& curve) {
  LeadingForm total = chi + h2;
  RationalPoly spec = d ? specialize_poly(total, chern_numbers_surface(d->to_long())) : specialize_symbolic(total);
  return spec - curve;
}

inline RationalPoly h0_bound_3(const std::optional<Rational>& d, const Rational& c, RegionMode mode,
                               CurveLBound lbound = CurveLBound::FamilyBound) {
  return assemble_h0(chi3_leading(c), h2chi_correction_3(c), d, curve_correction_3(d, c, mode, lbound));
}

/// h0_bound_3 at fixed degree as a quartic in c (exact region).
inline RationalPoly h0_bound_3_symbolic_c(const Rational& d, CurveLBound lbound = CurveLBound::FamilyBound) {
  return assemble_h0(chi3_leading_symbolic(), h2chi_correction_3_symbolic(), d, curve_correction_3_symbolic_c(d, lbound));
}

// ---------------------------------------------------------------- X_4

/// O_4 with top weights w*n pushed to X_2: indices (k, l).
inline GradedFamily x4_family_on_x2(const std::vector<long>& weights) {
  RationalPoly n = detail::sym("n");
  std::vector<RationalPoly> w;
  for (long a : weights) w.push_back(n * a);
  return push_to_base_family(4, w, 2);
}

/// Same bundle pushed one more stage, to X_1: indices (k, l, j).
inline GradedFamily x4_family_on_x1(const std::vector<long>& weights) {
  RationalPoly n = detail::sym("n");
  std::vector<RationalPoly> w;
  for (long a : weights) w.push_back(n * a);
  return push_to_base_family(4, w, 1);
}

inline LeadingForm chi4_leading(const std::vector<long>& weights, Method method = Method::Integration,
                                long* period = nullptr) {
  auto fam = x4_family_on_x2(weights);
  return detail::leading_form_sum(fam.region, chi_top_term(fam.member), {}, method, period);
}

/// Twist used for the h^2 pieces on X_4: the R^1 form S^a T^* (x) K^(p+1-2j), or
/// its Serre-dual twist (2-j-q). Both have the same top term.
enum class X4Twist { R1, SerreDual };

inline LeadingForm h2chi_correction_4(Method method = Method::Integration, X4Twist twist = X4Twist::R1,
                                      long* period = nullptr) {
  auto r1 = r1_family(x4_family_on_x1({6, 2, 1}));
  RationalPoly t = r1.q;
  if (twist == X4Twist::SerreDual) {
    RationalPoly n = detail::sym("n"), k = detail::sym("k"), l = detail::sym("l"), j = detail::sym("j");
    t = 2 - j - (k + l);
  }
  return detail::leading_form_sum(r1.region, surface_sym_chi_top(r1.p, t), {}, method, period);
}

/// Curve sums over I = {alpha > 0, (d-4) beta > alpha} inside the (k, l, j) region;
/// relaxed: beta > 0 for the positive term, (anchor-4) beta > alpha for the negative one.
inline RationalPoly curve_correction_4(const std::optional<Rational>& d, RegionMode mode, long anchor = 10,
                                       Method method = Method::Integration) {
  auto fam = x4_family_on_x1({6, 2, 1});
  RationalPoly s = fam.member.weights.front(), e = fam.member.kx_exponent;
  RationalPoly alpha = -s - 2, beta = e + s + 1;
  Region base = fam.region;
  base.greater(alpha, 0);
  RationalPoly half(Rational(1, 2));
  if (mode == RegionMode::Exact) {
    if (!d) throw std::invalid_argument("exact curve region needs a numeric degree");
    RationalPoly dd(*d);
    Region I = base;
    I.greater((dd - 4) * beta, alpha);
    return RationalPoly(detail::leading_sums(I, {curve_chi_leading(alpha, beta, dd)}, {}, method).values[0]);
  }
  Region big = base, small = base;
  big.greater(beta, 0);
  small.greater(RationalPoly(anchor - 4) * beta, alpha);
  auto t1 = detail::leading_sums(big, {alpha * beta * (alpha + beta) * half}, {}, method).values[0];
  auto t2 = detail::leading_sums(small, {alpha * alpha * alpha * half}, {}, method).values[0];
  RationalPoly dv = d ? RationalPoly(*d) : detail::sym("d");
  return dv * (dv - 4) * (dv - 4) * t1 - dv * (dv - 3) * t2;
}

inline RationalPoly h0_bound_4(const std::optional<Rational>& d, RegionMode mode) {
  return assemble_h0(chi4_leading({6, 2, 1}), h2chi_correction_4(), d, curve_correction_4(d, mode));
}

/// chi leading form of O_L(w_1 n, ..., w_r n) (weights right-aligned) for L = 3
/// or 4, through the X_1 or X_2 top-term sums respectively.
inline LeadingForm chi_leading_weights(int tower_level, const std::vector<long>& weights,
                                       Method method = Method::Integration, long* period = nullptr) {
  if (tower_level != 3 && tower_level != 4) throw unsupported_level("chi is implemented for X_3 and X_4");
  RationalPoly n = detail::sym("n");
  std::vector<RationalPoly> w;
  for (long a : weights) w.push_back(RationalPoly(a) * n);
  auto fam = push_to_base_family(tower_level, w, tower_level - 2);
  return detail::leading_form_sum(fam.region, chi_top_term(fam.member), {}, method, period);
}

// ---------------------------------------------------------------- scans

/// Least d in [d_min, d_max] with bound(d') > 0 for every d' in [d, d_max].
inline std::optional<long> threshold_find(const std::function<Rational(long)>& bound, long d_min = 5,
                                          long d_max = 60) {
  std::optional<long> answer;
  for (long d = d_max; d >= d_min; --d) {
    if (bound(d).sign() <= 0) break;
    answer = d;
  }
  return answer;
}

struct YRow {
  Rational c;
  Rational y;
};

/// y(c) on the grid from..to (inclusive) with the given step.
inline std::vector<YRow> y_grid(const RationalPoly& y, const Rational& from, const Rational& to, const Rational& step) {
  if (step.sign() <= 0) throw std::invalid_argument("step must be positive");
  if (!(from < to)) throw std::invalid_argument("empty range");
  std::vector<YRow> rows;
  for (Rational c = from; c <= to; c += step) rows.push_back({c, y.eval({{"c", c}})});
  return rows;
}

struct Witness {
  Rational c;
  Rational y;
};

/// First grid point strictly inside (from, to) with y(c) > 0.
inline std::optional<Witness> find_witness(const RationalPoly& y, const Rational& from = 4, const Rational& to = 7,
                                           const Rational& step = Rational(1, 20)) {
  for (const auto& row : y_grid(y, from, to, step)) {
    if (row.c == from || row.c == to) continue;
    if (row.y.sign() > 0) return Witness{row.c, row.y};
  }
  return std::nullopt;
}

/// Threshold when c may vary: d counts as big when O_3(2n, n) is already big by
/// the relaxed cubic, or some grid c in (4, 7) gives a positive exact-region
/// bound for O_3((c-1)n, n), computed directly at that c.
struct OptimizedThreshold {
  std::optional<long> threshold;
  std::map<long, Rational> witness;  // per big d: the c that certified it
};

inline OptimizedThreshold threshold_optimize_c(long d_min = 5, long d_max = 60, const Rational& step = Rational(1, 20)) {
  OptimizedThreshold out;
  RationalPoly cubic = h0_bound_3(std::nullopt, 3, RegionMode::Relaxed);
  for (long d = d_max; d >= d_min; --d) {
    std::optional<Rational> found;
    if (cubic.eval({{"d", Rational(d)}}).sign() > 0) found = Rational(3);
    for (Rational c = Rational(4) + step; !found && c < Rational(7); c += step)
      if (h0_bound_3(Rational(d), c, RegionMode::Exact).constant_value().sign() > 0) found = c;
    if (!found) break;
    out.witness[d] = *found;
    out.threshold = d;
  }
  return out;
}

// ---------------------------------------------------------------- reports

struct BigReport {
  int tower_level = 3;
  std::string weights;
  std::string mode;
  std::optional<Rational> degree;
  LeadingForm chi_leading;
  LeadingForm h2_chi_correction;
  RationalPoly curve_correction;
  RationalPoly h0_leading;
  std::optional<long> threshold;
  std::vector<std::pair<std::string, std::string>> notes;

  /// Flat key=value document; rationals are exact "num/den".
  std::string machine() const {
    std::ostringstream os;
    os << "tower_level=" << tower_level << "\n";
    os << "weights=" << weights << "\n";
    os << "mode=" << mode << "\n";
    if (degree) os << "degree=" << degree->fraction_str() << "\n";
    os << "chi_leading=" << chi_leading.str() << "\n";
    os << "h2_chi_correction=" << h2_chi_correction.str() << "\n";
    os << "curve_correction=" << curve_correction.str() << "\n";
    os << "h0_leading=" << h0_leading.str() << "\n";
    if (threshold) os << "threshold=" << *threshold << "\n";
    for (const auto& [k, v] : notes) os << "note." << k << "=" << v << "\n";
    return os.str();
  }

  std::string text() const {
    std::ostringstream os;
    const char* pw = tower_level == 3 ? "n^5" : "n^6";
    os << "X_" << tower_level << ", weights " << weights << ", " << mode << " region";
    if (degree) os << ", d = " << degree->str();
    os << "\n";
    os << "  chi leading         " << pw << " * (" << chi_leading.str() << ")\n";
    os << "  h2 chi correction   " << pw << " * (" << h2_chi_correction.str() << ")\n";
    os << "  curve correction    " << curve_correction.str() << "\n";
    os << "  h0 lower bound      " << pw << " * (" << h0_leading.str() << ")";
    if (h0_leading.is_constant()) os << "  ~ " << h0_leading.constant_value().decimal(7);
    os << "\n";
    if (threshold) os << "  big for d >= " << *threshold << "\n";
    for (const auto& [k, v] : notes) os << "  " << k << ": " << v << "\n";
    return os.str();
  }
};

namespace detail {

/// Points at parameter value n of the R1 curve family that the sums leave out.
inline void add_omission_notes(BigReport& r, const Region& region, const RationalPoly& p, const RationalPoly& q,
                               const std::optional<Rational>& d, long n) {
  Assignment at{{"n", Rational(n)}};
  Region zero = region;
  zero.at_least(-p, 0);
  r.notes.emplace_back("p_zero_points_n" + std::to_string(n), std::to_string(count_points(zero, at)));
  if (d) {
    RationalPoly dd(*d);
    Region thin = region;
    thin.greater((dd - 4) * q - p, 0);
    thin.at_least(2 * dd - ((dd - 4) * q - p), 0);
    r.notes.emplace_back("unstable_curve_points_n" + std::to_string(n), std::to_string(count_points(thin, at)));
  }
}

inline void add_boundary_notes(BigReport& r, const GradedFamily& fam, long d) {
  for (long n : {10L, 20L}) {
    auto counts = classify_family(fam, {{"n", Rational(n)}}, d);
    std::string key = "pieces_n" + std::to_string(n);
    r.notes.emplace_back(key + ".vanish", std::to_string(counts.vanish));
    r.notes.emplace_back(key + ".r1", std::to_string(counts.r1));
    r.notes.emplace_back(key + ".boundary", std::to_string(counts.boundary));
  }
}

}  // namespace detail

inline BigReport report_x3(const std::optional<Rational>& d, const Rational& c, RegionMode mode,
                           CurveLBound lbound = CurveLBound::FamilyBound) {
  BigReport r;
  r.tower_level = 3;
  r.weights = "(" + (c - 1).str() + "n,n)";
  r.mode = to_string(mode);
  r.degree = d;
  r.chi_leading = chi3_leading(c);
  r.h2_chi_correction = h2chi_correction_3(c);
  r.curve_correction = curve_correction_3(d, c, mode, lbound);
  r.h0_leading = assemble_h0(r.chi_leading, r.h2_chi_correction, d, r.curve_correction);
  if (mode == RegionMode::Exact && c != Rational(3)) r.notes.emplace_back("curve_l_bound", to_string(lbound));
  long dnum = d ? d->to_long() : 12;
  detail::add_boundary_notes(r, x3_setup(c).family, dnum);
  auto base = x3_curve_base(x3_setup(c), lbound);
  detail::add_omission_notes(r, base.region, base.p, base.q, d, 20);
  return r;
}

inline BigReport report_x4(const std::optional<Rational>& d, RegionMode mode) {
  BigReport r;
  r.tower_level = 4;
  r.weights = "(6n,2n,n)";
  r.mode = to_string(mode);
  r.degree = d;
  r.chi_leading = chi4_leading({6, 2, 1});
  r.h2_chi_correction = h2chi_correction_4();
  r.curve_correction = curve_correction_4(d, mode);
  r.h0_leading = assemble_h0(r.chi_leading, r.h2_chi_correction, d, r.curve_correction);
  long dnum = d ? d->to_long() : 10;
  detail::add_boundary_notes(r, x4_family_on_x1({6, 2, 1}), dnum);
  return r;
}

}  // namespace jetbig
