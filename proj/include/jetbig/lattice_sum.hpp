#pragma once

#include "jetbig/interpolate.hpp"
#include "jetbig/parallel.hpp"
#include "jetbig/region.hpp"

#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace jetbig {

namespace detail {

class sum_overflow : public std::overflow_error {
public:
  sum_overflow() : std::overflow_error("128-bit accumulator overflow") {}
};

/// Signed 128-bit integer that throws on overflow.
struct Checked128 {
  __int128 v = 0;
  Checked128() = default;
  Checked128(int64_t x) : v(x) {}  // NOLINT
  static Checked128 from(const mpz_class& z) {
    if (sizeof(long) < 8 || !z.fits_slong_p()) {
      mpz_class hi = z >> 64;
      if (!hi.fits_slong_p()) throw sum_overflow();
      mpz_class lo = z - (hi << 64);
      Checked128 r;
      r.v = (static_cast<__int128>(hi.get_si()) << 64) + static_cast<__int128>(lo.get_ui());
      return r;
    }
    return Checked128(static_cast<int64_t>(z.get_si()));
  }
  mpz_class to_mpz() const {
    unsigned __int128 mag = v < 0 ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(mag >> 64));
    mpz_class lo(static_cast<unsigned long>(mag & ~0ULL));
    mpz_class r = (hi << 64) + lo;
    return v < 0 ? mpz_class(-r) : r;
  }
  friend Checked128 operator+(Checked128 a, Checked128 b) {
    Checked128 r;
    if (__builtin_add_overflow(a.v, b.v, &r.v)) throw sum_overflow();
    return r;
  }
  friend Checked128 operator-(Checked128 a, Checked128 b) {
    Checked128 r;
    if (__builtin_sub_overflow(a.v, b.v, &r.v)) throw sum_overflow();
    return r;
  }
  friend Checked128 operator*(Checked128 a, Checked128 b) {
    Checked128 r;
    if (__builtin_mul_overflow(a.v, b.v, &r.v)) throw sum_overflow();
    return r;
  }
};

inline mpz_class as_mpz(const Checked128& x) { return x.to_mpz(); }
inline mpz_class as_mpz(const mpz_class& x) { return x; }
template <class Int>
Int from_mpz(const mpz_class& z) {
  if constexpr (std::is_same_v<Int, Checked128>) return Checked128::from(z);
  else return z;
}
template <class Int>
Int from_i64(int64_t x) {
  if constexpr (std::is_same_v<Int, Checked128>) return Checked128(x);
  else return mpz_class(static_cast<long>(x));
}

/// D * sum_{x=1}^{N} x^e as integer polynomials in N, sharing one denominator D.
struct PowerSums {
  mpz_class denominator = 1;
  std::vector<std::vector<mpz_class>> coef;  // coef[e][t]: coefficient of N^t

  explicit PowerSums(int max_exponent) {
    std::vector<RationalPoly> polys;
    for (int e = 0; e <= max_exponent; ++e) {
      std::vector<std::pair<Rational, Rational>> pts;
      Rational acc(0);
      for (long x = 0; x <= e + 1; ++x) {
        if (x > 0) acc += pow(Rational(x), static_cast<unsigned>(e));
        pts.emplace_back(Rational(x), acc);
      }
      polys.push_back(fit_univariate(pts, e + 1, "N"));
    }
    for (const auto& p : polys)
      for (const auto& [m, c] : p.terms()) denominator = lcm(denominator, c.den());
    for (const auto& p : polys) {
      std::vector<mpz_class> row(static_cast<size_t>(p.total_degree()) + 1, 0);
      for (int t = 0; t <= p.total_degree(); ++t) {
        Rational c = p.coefficient("N", t).constant_value();
        row[static_cast<size_t>(t)] = c.num() * (denominator / c.den());
      }
      coef.push_back(row);
    }
  }
};

/// Summand with integer coefficients, grouped by the exponent of the innermost variable.
struct CompiledSummand {
  mpz_class scale = 1;  // summand = (integer polynomial) / scale
  struct Term {
    std::vector<int> outer;
    mpz_class coef;
  };
  std::vector<std::vector<Term>> by_last;
};

inline CompiledSummand compile_summand(const RationalPoly& summand, const std::vector<std::string>& vars,
                                       const Assignment& params) {
  RationalPoly p = summand.partial_eval(params);
  for (const auto& v : p.variables())
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) throw missing_variable(v);
  CompiledSummand out;
  for (const auto& [m, c] : p.terms()) out.scale = lcm(out.scale, c.den());
  std::vector<size_t> where(p.variables().size());
  for (size_t i = 0; i < p.variables().size(); ++i)
    where[i] = static_cast<size_t>(std::find(vars.begin(), vars.end(), p.variables()[i]) - vars.begin());
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> full(vars.size(), 0);
    for (size_t i = 0; i < m.size(); ++i) full[where[i]] = m[i];
    int last = full.back();
    full.pop_back();
    if (out.by_last.size() <= static_cast<size_t>(last)) out.by_last.resize(static_cast<size_t>(last) + 1);
    out.by_last[static_cast<size_t>(last)].push_back({full, c.num() * (out.scale / c.den())});
  }
  return out;
}

/// Staged evaluation plan: after fixing variable i, the summand's coefficients
/// as a polynomial in the variables after i. Stage -1 holds the raw terms.
struct StagePlan {
  struct Source {
    size_t from;
    int exponent;
  };
  std::vector<std::vector<Source>> groups;  // groups[t]: contributions to coefficient t
};

template <class Int>
std::vector<Rational> sum_compiled(const CompiledRegion& cr, const std::vector<CompiledSummand>& summands,
                                   const PowerSums& ps) {
  const size_t dim = cr.dim;
  const size_t ns = summands.size();
  if (cr.infeasible || dim == 0) return std::vector<Rational>(ns, Rational(0));

  // Raw terms: exponent tuples over all variables, one coefficient slot per summand.
  std::map<std::vector<int>, size_t> raw_index;
  std::vector<std::vector<int>> raw_exp;
  for (const auto& cs : summands)
    for (size_t e = 0; e < cs.by_last.size(); ++e)
      for (const auto& t : cs.by_last[e]) {
        std::vector<int> full = t.outer;
        full.push_back(static_cast<int>(e));
        if (raw_index.emplace(full, raw_exp.size()).second) raw_exp.push_back(full);
      }
  std::vector<Int> raw(raw_exp.size() * ns, from_i64<Int>(0));
  for (size_t s = 0; s < ns; ++s)
    for (size_t e = 0; e < summands[s].by_last.size(); ++e)
      for (const auto& t : summands[s].by_last[e]) {
        std::vector<int> full = t.outer;
        full.push_back(static_cast<int>(e));
        raw[raw_index[full] * ns + s] = from_mpz<Int>(t.coef);
      }

  // stage i consumes variable i; the tuples shrink from the front.
  std::vector<StagePlan> plans(dim > 0 ? dim - 1 : 0);
  std::vector<std::vector<std::vector<int>>> stage_exp(dim);
  stage_exp[0] = raw_exp;
  int max_exp = 0;
  for (const auto& e : raw_exp)
    for (int v : e) max_exp = std::max(max_exp, v);
  for (size_t i = 0; i + 1 < dim; ++i) {
    std::map<std::vector<int>, size_t> idx;
    std::vector<std::vector<int>> next;
    for (size_t src = 0; src < stage_exp[i].size(); ++src) {
      const auto& e = stage_exp[i][src];
      std::vector<int> rest(e.begin() + 1, e.end());
      auto [it, fresh] = idx.emplace(rest, next.size());
      if (fresh) {
        next.push_back(rest);
        plans[i].groups.emplace_back();
      }
      plans[i].groups[it->second].push_back({src, e[0]});
    }
    stage_exp[i + 1] = next;
  }
  // Final stage: coefficient of x_last^e for each e.
  const auto& last_exp = stage_exp[dim - 1];
  int max_last = 0;
  for (const auto& e : last_exp) max_last = std::max(max_last, e[0]);

  std::vector<std::vector<Int>> fp;
  for (const auto& row : ps.coef) {
    fp.emplace_back();
    for (const auto& c : row) fp.back().push_back(from_mpz<Int>(c));
  }
  const size_t qdeg = static_cast<size_t>(max_last) + 2;

  std::vector<std::vector<Int>> values(dim);
  values[0] = raw;
  for (size_t i = 1; i < dim; ++i) values[i].assign(stage_exp[i].size() * ns, from_i64<Int>(0));
  std::vector<Int> pw(static_cast<size_t>(max_exp) + 1, from_i64<Int>(1));
  std::vector<Int> total(ns, from_i64<Int>(0));
  std::vector<Int> q(qdeg * ns, from_i64<Int>(0));
  std::vector<int64_t> x(dim, 0);

  auto inner = [&](int64_t lo, int64_t hi) {
    const auto& cur = values[dim - 1];
    std::fill(q.begin(), q.end(), from_i64<Int>(0));
    for (size_t t = 0; t < last_exp.size(); ++t) {
      const auto& row = fp[static_cast<size_t>(last_exp[t][0])];
      for (size_t s = 0; s < ns; ++s) {
        const Int& c = cur[t * ns + s];
        for (size_t k = 0; k < row.size(); ++k) q[k * ns + s] = q[k * ns + s] + c * row[k];
      }
    }
    Int top = from_i64<Int>(hi), bottom = from_i64<Int>(lo - 1);
    for (size_t s = 0; s < ns; ++s) {
      Int a = q[(qdeg - 1) * ns + s], b = a;
      for (size_t k = qdeg - 1; k-- > 0;) {
        a = a * top + q[k * ns + s];
        b = b * bottom + q[k * ns + s];
      }
      total[s] = total[s] + (a - b);
    }
  };

  std::function<void(size_t)> rec = [&](size_t lvl) {
    int64_t lo = 0, hi = -1;
    if (!level_range(cr.levels[lvl], lvl, x.data(), lo, hi)) return;
    if (lvl + 1 == dim) {
      inner(lo, hi);
      return;
    }
    const auto& plan = plans[lvl];
    const auto& src = values[lvl];
    auto& dst = values[lvl + 1];
    for (int64_t v = lo; v <= hi; ++v) {
      x[lvl] = v;
      Int xv = from_i64<Int>(v);
      for (size_t e = 1; e < pw.size(); ++e) pw[e] = pw[e - 1] * xv;
      for (size_t t = 0; t < plan.groups.size(); ++t)
        for (size_t s = 0; s < ns; ++s) {
          Int acc = from_i64<Int>(0);
          for (const auto& g : plan.groups[t]) acc = acc + src[g.from * ns + s] * pw[static_cast<size_t>(g.exponent)];
          dst[t * ns + s] = acc;
        }
      rec(lvl + 1);
    }
  };
  rec(0);

  std::vector<Rational> out;
  for (size_t s = 0; s < ns; ++s) out.emplace_back(as_mpz(total[s]), summands[s].scale * ps.denominator);
  return out;
}

}  // namespace detail

/// Exact sums of several polynomial summands over the integer points of a region.
/// The innermost variable is summed in closed form; everything is exact.
inline std::vector<Rational> exact_sum(const Region& region, const std::vector<RationalPoly>& summands,
                                       const Assignment& params) {
  auto cr = detail::compile(region, params);
  if (region.variables.empty()) {  // one empty point, or none
    std::vector<Rational> out;
    for (const auto& s : summands) out.push_back(cr.infeasible ? Rational(0) : s.eval(params));
    return out;
  }
  std::vector<detail::CompiledSummand> compiled;
  int max_last = 0;
  for (const auto& s : summands) {
    compiled.push_back(detail::compile_summand(s, region.variables, params));
    max_last = std::max(max_last, static_cast<int>(compiled.back().by_last.size()) - 1);
  }
  static const detail::PowerSums ps(12);
  if (max_last > 12) throw std::invalid_argument("exact_sum: innermost degree above 12");
  try {
    return detail::sum_compiled<detail::Checked128>(cr, compiled, ps);
  } catch (const detail::sum_overflow&) {
    return detail::sum_compiled<mpz_class>(cr, compiled, ps);
  }
}

inline Rational exact_sum(const Region& region, const RationalPoly& summand, const Assignment& params) {
  return exact_sum(region, std::vector<RationalPoly>{summand}, params).front();
}

/// Plain enumeration oracle for exact_sum: evaluates the summand point by point.
inline Rational brute_force_sum(const Region& region, const RationalPoly& summand, const Assignment& params) {
  RationalPoly s = summand.partial_eval(params);
  Rational total(0);
  enumerate_region(region, params, [&](const std::vector<int64_t>& x) {
    Assignment at;
    for (size_t i = 0; i < x.size(); ++i) at[region.variables[i]] = Rational(static_cast<long>(x[i]));
    total += s.eval(at);
  });
  return total;
}

/// Polynomial branches indexed by n mod period, valid for n >= start.
struct QuasiPoly {
  long period = 1;
  long start = 0;
  std::vector<RationalPoly> branches;
  std::string var = "n";

  const RationalPoly& branch(long n) const { return branches[static_cast<size_t>(((n % period) + period) % period)]; }
  Rational eval(long n) const { return branch(n).eval({{var, Rational(n)}}); }

  /// Coefficient of var^degree; throws if the branches disagree.
  Rational leading_coefficient(int degree) const {
    Rational lead = branches.front().coefficient(var, degree).constant_value();
    for (const auto& b : branches)
      if (b.coefficient(var, degree).constant_value() != lead)
        throw fit_failure("quasi-polynomial branches disagree on the n^" + std::to_string(degree) + " coefficient");
    return lead;
  }
};

namespace detail {

inline std::vector<Rational> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const size_t n = a.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) return {};
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Rational f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (size_t r = 0; r < n; ++r) b[r] /= a[r][r];
  return b;
}

}  // namespace detail

/// An upper bound for the quasi-period of lattice sums over the region as n
/// grows: the lcm of all vertex denominators of the integer-tightened region,
/// viewed as affine functions of n. Other parameters must be assigned.
inline long period_bound(const Region& region, const Assignment& params, const std::string& n_var = "n") {
  const size_t dim = region.variables.size();
  struct Row {
    std::vector<Rational> a;
    Rational b1, b0;  // a.x + b1 n + b0 >= 0
  };
  std::vector<Row> rows;
  std::vector<std::string> with_n = region.variables;
  with_n.push_back(n_var);
  for (const auto& c : region.constraints) {
    auto ic = detail::integer_form(c, with_n, params);
    Row r;
    mpz_class g = 0;
    for (size_t i = 0; i < dim; ++i) g = gcd(g, mpz_class(static_cast<long>(ic.coef[i])));
    if (g == 0) continue;
    for (size_t i = 0; i < dim; ++i) r.a.emplace_back(static_cast<long>(ic.coef[i]));
    r.b1 = Rational(static_cast<long>(ic.coef[dim]));
    r.b0 = Rational(static_cast<long>(ic.constant - (ic.strict ? 1 : 0)));
    Rational gr{mpz_class(g)};
    for (auto& v : r.a) v /= gr;
    r.b1 /= gr;
    r.b0 /= gr;
    rows.push_back(r);
  }
  mpz_class bound = 1;
  std::vector<size_t> pick(dim);
  std::function<void(size_t, size_t)> choose = [&](size_t from, size_t depth) {
    if (depth == dim) {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b1, b0;
      for (auto i : pick) {
        a.push_back(rows[i].a);
        b1.push_back(-rows[i].b1);
        b0.push_back(-rows[i].b0);
      }
      auto v1 = detail::solve_square(a, b1);
      if (v1.empty()) return;
      for (const auto& r : rows) {
        Rational s = r.b1;
        for (size_t i = 0; i < dim; ++i) s += r.a[i] * v1[i];
        if (s.sign() < 0) return;
      }
      auto v0 = detail::solve_square(a, b0);
      for (const auto& v : v1) bound = lcm(bound, v.den());
      for (const auto& v : v0) bound = lcm(bound, v.den());
      return;
    }
    for (size_t i = from; i < rows.size(); ++i) {
      pick[depth] = i;
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);
  if (!bound.fits_slong_p()) throw std::overflow_error("period bound exceeds machine range");
  return bound.get_si();
}

struct FitOptions {
  int degree = 0;            // degree in n of every branch
  long max_period = 0;       // 0: use the vertex-denominator bound
  int held_out = 2;          // extra samples per branch, checked exactly
  long n0 = -1;              // first sample; -1: 3 * degree
  std::string n_var = "n";
  std::string csv_path;      // optional dump of every computed sample
};

struct ClosedForm {
  std::vector<QuasiPoly> forms;  // one per summand
  std::vector<Rational> leading;  // n^degree coefficients
  int degree = 0;
  long period = 1;
  long period_bound = 1;
  long n0 = 0;
  size_t samples = 0;
  size_t held_out_checks = 0;
};

/// Recovers exact closed forms in n of lattice sums over a region by sampling
/// and interpolation. Candidate periods are the divisors of the period bound in
/// increasing order; for each, the first sample point doubles once on failure.
inline ClosedForm fit_closed_form(const Region& region, const std::vector<RationalPoly>& summands,
                                  const Assignment& params, const FitOptions& opt) {
  long bound = period_bound(region, params, opt.n_var);
  long cap = opt.max_period > 0 ? std::min(opt.max_period, bound) : bound;
  std::vector<long> periods;
  for (long p = 1; p <= cap; ++p)
    if (bound % p == 0) periods.push_back(p);

  std::map<long, std::vector<Rational>> cache;
  auto ensure = [&](const std::vector<long>& ns) {
    std::vector<long> todo;
    for (long n : ns)
      if (!cache.count(n)) todo.push_back(n);
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    std::vector<std::vector<Rational>> vals(todo.size());
    parallel_for(todo.size(), [&](size_t i) {
      Assignment at = params;
      at[opt.n_var] = Rational(todo[i]);
      vals[i] = exact_sum(region, summands, at);
    });
    for (size_t i = 0; i < todo.size(); ++i) cache[todo[i]] = std::move(vals[i]);
  };

  const long base_n0 = opt.n0 >= 0 ? opt.n0 : 3L * opt.degree;
  const int per_branch = opt.degree + 1 + opt.held_out;
  std::string last_error = "no candidate period";
  for (long period : periods) {
    for (long n0 : {base_n0, 2 * base_n0}) {
      std::vector<long> ns;
      for (long r = 0; r < period; ++r)
        for (int i = 0; i < per_branch; ++i) ns.push_back(n0 + r + period * i);
      ensure(ns);
      ClosedForm out;
      out.degree = opt.degree;
      out.period = period;
      out.period_bound = bound;
      out.n0 = n0;
      out.samples = ns.size();
      try {
        for (size_t s = 0; s < summands.size(); ++s) {
          QuasiPoly q;
          q.period = period;
          q.start = n0;
          q.var = opt.n_var;
          q.branches.resize(static_cast<size_t>(period));
          for (long r = 0; r < period; ++r) {
            long first = n0 + r;
            std::vector<std::pair<Rational, Rational>> pts;
            for (int i = 0; i < per_branch; ++i) {
              long n = first + period * i;
              pts.emplace_back(Rational(n), cache.at(n)[s]);
            }
            q.branches[static_cast<size_t>(first % period)] = fit_univariate(pts, opt.degree, opt.n_var);
          }
          out.leading.push_back(q.leading_coefficient(opt.degree));
          out.forms.push_back(std::move(q));
        }
      } catch (const fit_failure& e) {
        last_error = e.what();
        continue;
      }
      out.held_out_checks = static_cast<size_t>(period) * static_cast<size_t>(opt.held_out) * summands.size();
      if (!opt.csv_path.empty()) {
        std::ofstream csv(opt.csv_path);
        for (const auto& [k, v] : params) csv << k << ",";
        csv << opt.n_var;
        for (size_t s = 0; s < summands.size(); ++s) csv << ",value" << s;
        csv << "\n";
        for (const auto& [n, vals] : cache) {
          for (const auto& [k, v] : params) csv << v.fraction_str() << ",";
          csv << n;
          for (const auto& v : vals) csv << "," << v.fraction_str();
          csv << "\n";
        }
      }
      return out;
    }
  }
  throw fit_failure("fit_closed_form: no period up to " + std::to_string(cap) + " fits degree " +
                    std::to_string(opt.degree) + " (last: " + last_error + ")");
}

}  // namespace jetbig
