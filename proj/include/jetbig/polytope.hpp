#pragma once

#include "jetbig/region.hpp"

#include <set>
#include <string>
#include <vector>

namespace jetbig {

namespace detail {

/// coef . x + constant >= 0 over the first coef.size() variables.
struct Affine {
  std::vector<Rational> coef;
  Rational constant;

  friend bool operator<(const Affine& a, const Affine& b) {
    return std::tie(a.coef, a.constant) < std::tie(b.coef, b.constant);
  }
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// Positive rescaling so that identical half-spaces compare equal.
inline Affine canonical(Affine a) {
  Rational scale(0);
  for (const auto& c : a.coef)
    if (!c.is_zero()) {
      scale = c.sign() > 0 ? c : -c;
      break;
    }
  if (scale.is_zero()) scale = a.constant.is_zero() ? Rational(1) : (a.constant.sign() > 0 ? a.constant : -a.constant);
  for (auto& c : a.coef) c /= scale;
  a.constant /= scale;
  return a;
}

inline RationalPoly affine_poly(const std::vector<Rational>& coef, const Rational& constant,
                                const std::vector<std::string>& vars) {
  RationalPoly p(constant);
  for (size_t i = 0; i < coef.size(); ++i)
    if (!coef[i].is_zero()) p += RationalPoly::var(vars[i]) * coef[i];
  return p;
}

/// Integrates each f over {x : all constraints >= 0} in the first m variables by
/// eliminating the last variable: the region splits into cells on which one lower
/// and one upper bound are active, and each cell is integrated recursively.
inline std::vector<Rational> integrate_cells(const std::set<Affine>& cons, const std::vector<RationalPoly>& fs,
                                             const std::vector<std::string>& vars, size_t m) {
  std::vector<Rational> zero(fs.size(), Rational(0));
  if (m == 0) {
    for (const auto& c : cons)
      if (c.constant.sign() < 0) return zero;
    std::vector<Rational> out;
    for (const auto& f : fs) out.push_back(f.constant_value());
    return out;
  }
  const size_t x = m - 1;
  std::vector<Affine> lows, ups;  // bounds as affine functions of the remaining m-1 variables
  std::vector<Affine> plain;
  for (const auto& c : cons) {
    const Rational& a = c.coef[x];
    if (a.is_zero()) {
      Affine p{std::vector<Rational>(c.coef.begin(), c.coef.begin() + static_cast<long>(x)), c.constant};
      plain.push_back(p);
      continue;
    }
    Affine b;
    for (size_t i = 0; i < x; ++i) b.coef.push_back(-c.coef[i] / a);
    b.constant = -c.constant / a;
    (a.sign() > 0 ? lows : ups).push_back(b);
  }
  auto dedupe = [](std::vector<Affine>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedupe(lows);
  dedupe(ups);
  if (lows.empty() || ups.empty()) throw unbounded_region("polytope is unbounded in '" + vars[x] + "'");

  std::vector<RationalPoly> anti;
  for (const auto& f : fs) anti.push_back(f.antiderivative(vars[x]));

  std::vector<Rational> total = zero;
  auto diff = [](const Affine& a, const Affine& b) {  // a - b >= 0
    Affine d{a.coef, a.constant - b.constant};
    for (size_t i = 0; i < d.coef.size(); ++i) d.coef[i] -= b.coef[i];
    return d;
  };
  for (size_t li = 0; li < lows.size(); ++li)
    for (size_t ui = 0; ui < ups.size(); ++ui) {
      const Affine& lo = lows[li];
      const Affine& up = ups[ui];
      std::set<Affine> cell;
      bool empty = false;
      auto add = [&](const Affine& a) {
        bool has_var = std::any_of(a.coef.begin(), a.coef.end(), [](const Rational& r) { return !r.is_zero(); });
        if (!has_var) {
          if (a.constant.sign() < 0) empty = true;
          return;
        }
        cell.insert(canonical(a));
      };
      for (const auto& p : plain) add(p);
      // Ties between distinct bounds only happen on measure-zero sets.
      for (size_t o = 0; o < lows.size(); ++o)
        if (o != li) add(diff(lo, lows[o]));
      for (size_t o = 0; o < ups.size(); ++o)
        if (o != ui) add(diff(ups[o], up));
      add(diff(up, lo));
      if (empty) continue;
      RationalPoly lo_p = affine_poly(lo.coef, lo.constant, vars);
      RationalPoly up_p = affine_poly(up.coef, up.constant, vars);
      std::vector<RationalPoly> inner;
      for (const auto& F : anti)
        inner.push_back(F.substitute({{vars[x], up_p}}) - F.substitute({{vars[x], lo_p}}));
      auto part = integrate_cells(cell, inner, vars, x);
      for (size_t i = 0; i < total.size(); ++i) total[i] += part[i];
    }
  return total;
}

}  // namespace detail

/// Leading behaviour of lattice sums: for a region whose constraints are affine
/// in (variables, n), the sum of a summand of degree D in (variables, n) equals
/// value * n^(D + dim) + lower order terms, where value is the integral of the
/// summand's top homogeneous part over the region's n = 1 leading polytope.
struct LeadingIntegral {
  std::vector<Rational> values;
  std::vector<int> degrees;  // power of n each value multiplies
};

inline LeadingIntegral leading_integral(const Region& region, const std::vector<RationalPoly>& summands,
                                        const Assignment& params, const std::string& n_var = "n") {
  const size_t dim = region.variables.size();
  std::set<std::string> homog(region.variables.begin(), region.variables.end());
  homog.insert(n_var);
  auto check_vars = [&](const RationalPoly& p, const char* what) {
    for (const auto& v : p.variables())
      if (!homog.count(v)) throw missing_variable(v + std::string(" (in ") + what + ")");
  };

  std::set<detail::Affine> cons;
  bool infeasible = false;
  for (const auto& c : region.constraints) {
    RationalPoly e = c.expr.partial_eval(params);
    check_vars(e, "constraint");
    if (e.total_degree() > 1) throw std::invalid_argument("constraint is not affine: " + e.str());
    RationalPoly lead = e.homogeneous_part(homog, 1).partial_eval({{n_var, Rational(1)}});
    detail::Affine a;
    for (const auto& v : region.variables) a.coef.push_back(lead.coefficient(v, 1).constant_value());
    Assignment origin;
    for (const auto& v : region.variables) origin[v] = 0;
    a.constant = lead.eval(origin);
    bool has_var = std::any_of(a.coef.begin(), a.coef.end(), [](const Rational& r) { return !r.is_zero(); });
    if (!has_var) {
      if (a.constant.sign() < 0) infeasible = true;
      continue;
    }
    cons.insert(detail::canonical(a));
  }

  LeadingIntegral out;
  std::vector<RationalPoly> tops;
  for (const auto& s : summands) {
    RationalPoly p = s.partial_eval(params);
    check_vars(p, "summand");
    int deg = p.is_zero() ? 0 : p.degree_over(homog);
    tops.push_back(p.homogeneous_part(homog, deg).partial_eval({{n_var, Rational(1)}}));
    out.degrees.push_back(deg + static_cast<int>(dim));
  }
  out.values = infeasible ? std::vector<Rational>(summands.size(), Rational(0))
                          : detail::integrate_cells(cons, tops, region.variables, dim);
  return out;
}

}  // namespace jetbig
