#pragma once

#include "jetbig/ratpoly.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace jetbig {

/// A region whose bound analysis finds some variable unbounded above or below.
class unbounded_region : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Relation { NonNegative, Positive };

/// expr >= 0 or expr > 0; expr is affine in the region's variables.
struct Constraint {
  RationalPoly expr;
  Relation rel = Relation::NonNegative;

  bool strict() const { return rel == Relation::Positive; }
  std::string str() const { return expr.str() + (strict() ? " > 0" : " >= 0"); }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Integer points cut out by affine constraints. Constraint coefficients may
/// involve parameters (n, c, d, ...) which must be fixed before enumeration.
struct Region {
  std::vector<std::string> variables;
  std::vector<Constraint> constraints;

  Region& at_least(const RationalPoly& lhs, const RationalPoly& rhs) {
    constraints.push_back({lhs - rhs, Relation::NonNegative});
    return *this;
  }
  Region& greater(const RationalPoly& lhs, const RationalPoly& rhs) {
    constraints.push_back({lhs - rhs, Relation::Positive});
    return *this;
  }
  /// lo <= var <= hi
  Region& between(const std::string& var, const RationalPoly& lo, const RationalPoly& hi) {
    if (std::find(variables.begin(), variables.end(), var) == variables.end()) variables.push_back(var);
    RationalPoly v = RationalPoly::var(var);
    at_least(v, lo);
    return at_least(hi, v);
  }

  Region with(const Constraint& c) const {
    Region r = *this;
    r.constraints.push_back(c);
    return r;
  }

  Region partial_eval(const Assignment& at) const {
    Region r{variables, {}};
    for (const auto& c : constraints) r.constraints.push_back({c.expr.partial_eval(at), c.rel});
    return r;
  }

  std::set<std::string> parameters() const {
    std::set<std::string> out;
    for (const auto& c : constraints)
      for (const auto& v : c.expr.variables())
        if (std::find(variables.begin(), variables.end(), v) == variables.end()) out.insert(v);
    return out;
  }

  std::string str() const {
    std::string out = "{";
    for (size_t i = 0; i < constraints.size(); ++i) out += (i ? ", " : "") + constraints[i].str();
    return out + "}";
  }
};

namespace detail {

/// sum coef[i]*x_i + constant (>= 0, or > 0 when strict); integer data.
struct IntConstraint {
  std::vector<int64_t> coef;
  int64_t constant = 0;
  bool strict = false;
  friend bool operator<(const IntConstraint& a, const IntConstraint& b) {
    return std::tie(a.coef, a.constant, a.strict) < std::tie(b.coef, b.constant, b.strict);
  }
};

inline int64_t to_i64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("region coefficient exceeds 64 bits: " + z.get_str());
  return z.get_si();
}

inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

/// Scales a constraint with fully assigned parameters to primitive integer form.
inline IntConstraint integer_form(const Constraint& c, const std::vector<std::string>& vars, const Assignment& params) {
  RationalPoly e = c.expr.partial_eval(params);
  for (const auto& v : e.variables())
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) throw missing_variable(v);
  if (e.total_degree() > 1) throw std::invalid_argument("region constraint is not affine: " + e.str());
  std::vector<Rational> q(vars.size() + 1);
  for (size_t i = 0; i < vars.size(); ++i) q[i] = e.coefficient(vars[i], 1).constant_value();
  Assignment origin;
  for (const auto& v : vars) origin[v] = 0;
  q[vars.size()] = e.eval(origin);
  mpz_class den = 1;
  for (const auto& r : q) den = lcm(den, r.den());
  IntConstraint out;
  out.strict = c.strict();
  mpz_class g = 0;
  std::vector<mpz_class> z;
  for (const auto& r : q) {
    z.push_back(r.num() * (den / r.den()));
    g = gcd(g, z.back());
  }
  if (g == 0) g = 1;
  for (size_t i = 0; i < vars.size(); ++i) out.coef.push_back(to_i64(z[i] / g));
  out.constant = to_i64(z.back() / g);
  return out;
}

/// Constraints sorted by the highest variable they involve, after Fourier-Motzkin
/// projection; level i bounds variable i given variables 0..i-1.
struct CompiledRegion {
  size_t dim = 0;
  std::vector<std::vector<IntConstraint>> levels;
  bool infeasible = false;  // some variable-free constraint fails
};

inline int top_index(const IntConstraint& c) {
  for (size_t i = c.coef.size(); i-- > 0;)
    if (c.coef[i] != 0) return static_cast<int>(i);
  return -1;
}

inline IntConstraint normalized(IntConstraint c) {
  int64_t g = 0;
  for (auto a : c.coef) g = std::gcd(g, a);
  if (g > 1) {
    for (auto& a : c.coef) a /= g;
    // floor keeps every integer point: sum a x >= -C  <=>  sum (a/g) x >= ceil(-C/g)
    int64_t rhs = c.strict ? -c.constant + 1 : -c.constant;
    c.constant = -ceil_div(rhs, g);
    c.strict = false;
  }
  return c;
}

inline CompiledRegion compile(const Region& region, const Assignment& params) {
  CompiledRegion out;
  out.dim = region.variables.size();
  out.levels.assign(out.dim, {});
  std::set<IntConstraint> current;
  for (const auto& c : region.constraints) {
    auto ic = integer_form(c, region.variables, params);
    if (top_index(ic) < 0) {
      if (ic.constant < 0 || (ic.strict && ic.constant == 0)) out.infeasible = true;
      continue;
    }
    current.insert(normalized(ic));
  }
  for (size_t lvl = out.dim; lvl-- > 0;) {
    std::vector<IntConstraint> lows, ups;
    std::set<IntConstraint> next;
    for (const auto& c : current) {
      int t = top_index(c);
      if (t == static_cast<int>(lvl)) {
        out.levels[lvl].push_back(c);
        (c.coef[lvl] > 0 ? lows : ups).push_back(c);
      } else if (t >= 0) {
        next.insert(c);
      } else if (c.constant < 0 || (c.strict && c.constant == 0)) {
        out.infeasible = true;
      }
    }
    if (lows.empty() || ups.empty())
      throw unbounded_region("variable '" + region.variables[lvl] + "' is unbounded " +
                             (lows.empty() ? "below" : "above") + " in " + region.str());
    // Projection is only used to bound outer loops, so non-strict relaxations suffice.
    for (const auto& a : lows)
      for (const auto& b : ups) {
        IntConstraint comb;
        comb.coef.resize(out.dim);
        __int128 fa = -b.coef[lvl], fb = a.coef[lvl];
        for (size_t i = 0; i < out.dim; ++i) {
          __int128 v = fa * a.coef[i] + fb * b.coef[i];
          if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("projection overflow");
          comb.coef[i] = static_cast<int64_t>(v);
        }
        __int128 k = fa * a.constant + fb * b.constant;
        if (k > INT64_MAX || k < INT64_MIN) throw std::overflow_error("projection overflow");
        comb.constant = static_cast<int64_t>(k);
        if (top_index(comb) < 0) {
          if (comb.constant < 0) out.infeasible = true;
          continue;
        }
        next.insert(normalized(comb));
      }
    current = std::move(next);
  }
  return out;
}

/// Integer range of variable `lvl` given the values of the outer variables.
inline bool level_range(const std::vector<IntConstraint>& cons, size_t lvl, const int64_t* x, int64_t& lo,
                        int64_t& hi) {
  bool have_lo = false, have_hi = false;
  for (const auto& c : cons) {
    __int128 rest = c.constant;
    for (size_t i = 0; i < lvl; ++i) rest += static_cast<__int128>(c.coef[i]) * x[i];
    int64_t a = c.coef[lvl];
    int64_t r = static_cast<int64_t>(rest);
    if (a > 0) {  // a x >= -r  (or > -r)
      int64_t b = c.strict ? floor_div(-r, a) + 1 : ceil_div(-r, a);
      if (!have_lo || b > lo) lo = b;
      have_lo = true;
    } else {  // -a x <= r  (or < r)
      int64_t b = c.strict ? ceil_div(r, -a) - 1 : floor_div(r, -a);
      if (!have_hi || b < hi) hi = b;
      have_hi = true;
    }
  }
  return have_lo && have_hi && lo <= hi;
}

}  // namespace detail

/// Visits every integer point of the region, in lexicographic order of the
/// variable list. All parameters must be assigned.
inline void enumerate_region(const Region& region, const Assignment& params,
                             const std::function<void(const std::vector<int64_t>&)>& visit) {
  auto cr = detail::compile(region, params);
  if (cr.infeasible) return;
  std::vector<int64_t> x(cr.dim);
  if (cr.dim == 0) return visit(x);  // the single empty point
  std::function<void(size_t)> rec = [&](size_t lvl) {
    int64_t lo = 0, hi = -1;
    if (!detail::level_range(cr.levels[lvl], lvl, x.data(), lo, hi)) return;
    for (int64_t v = lo; v <= hi; ++v) {
      x[lvl] = v;
      if (lvl + 1 == cr.dim) visit(x);
      else rec(lvl + 1);
    }
  };
  rec(0);
}

inline size_t count_points(const Region& region, const Assignment& params) {
  size_t n = 0;
  enumerate_region(region, params, [&](const std::vector<int64_t>&) { ++n; });
  return n;
}

}  // namespace jetbig
