#pragma once

#include "jetbig/ratpoly.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jetbig {

/// Highest tower level X_k the ring supports.
inline constexpr int kMaxTowerLevel = 8;

class unsupported_level : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// a*c1^2 + b*c2: a top-degree class on the surface, with polynomial coefficients.
struct LeadingForm {
  RationalPoly c1sq;
  RationalPoly c2;

  bool is_zero() const { return c1sq.is_zero() && c2.is_zero(); }

  LeadingForm& operator+=(const LeadingForm& o) {
    c1sq += o.c1sq;
    c2 += o.c2;
    return *this;
  }
  LeadingForm& operator-=(const LeadingForm& o) {
    c1sq -= o.c1sq;
    c2 -= o.c2;
    return *this;
  }
  friend LeadingForm operator+(LeadingForm a, const LeadingForm& b) { return a += b; }
  friend LeadingForm operator-(LeadingForm a, const LeadingForm& b) { return a -= b; }
  friend LeadingForm operator*(LeadingForm a, const RationalPoly& s) {
    a.c1sq *= s;
    a.c2 *= s;
    return a;
  }
  friend bool operator==(const LeadingForm&, const LeadingForm&) = default;

  LeadingForm partial_eval(const Assignment& at) const { return {c1sq.partial_eval(at), c2.partial_eval(at)}; }

  /// Text in the order the literature writes these: the positive term first,
  /// c1sq first on ties, e.g. "249/60*c2 - 1*c1sq".
  std::string str() const {
    auto piece = [](const RationalPoly& coef, const char* name) {
      if (coef.is_constant()) return coef.constant_value().str() + "*" + name;
      return "(" + coef.str() + ")*" + std::string(name);
    };
    auto sign_of = [](const RationalPoly& p) { return p.is_constant() ? p.constant_value().sign() : 1; };
    if (is_zero()) return "0";
    if (c2.is_zero()) return piece(c1sq, "c1sq");
    if (c1sq.is_zero()) return piece(c2, "c2");
    bool c2_first = sign_of(c2) > 0 && sign_of(c1sq) < 0;
    const RationalPoly& a = c2_first ? c2 : c1sq;
    const RationalPoly& b = c2_first ? c1sq : c2;
    const char* an = c2_first ? "c2" : "c1sq";
    const char* bn = c2_first ? "c1sq" : "c2";
    std::string out = piece(a, an);
    if (b.is_constant() && b.constant_value().sign() < 0)
      out += " - " + piece(RationalPoly(-b.constant_value()), bn);
    else
      out += " + " + piece(b, bn);
    return out;
  }
};

/// Chern numbers c1^2 and c2 of a surface.
struct ChernNumbers {
  Rational c1sq;
  Rational c2;
  std::optional<long> degree;

  /// c1^2 + c2 = 12 chi(O_X).
  bool noether_integral() const { return ((c1sq + c2) / Rational(12)).is_integer(); }
};

/// Smooth surface of degree d in P^3: c1^2 = d(d-4)^2, c2 = d(d^2-4d+6).
inline ChernNumbers chern_numbers_surface(long d) {
  if (d < 1) throw std::invalid_argument("surface degree must be >= 1, got " + std::to_string(d));
  Rational dd(d);
  return {dd * (dd - 4) * (dd - 4), dd * (dd * dd - 4 * dd + 6), d};
}

/// The same Chern numbers as polynomials in a degree symbol.
inline std::pair<RationalPoly, RationalPoly> chern_polys_surface(const std::string& var = "d") {
  RationalPoly d = RationalPoly::var(var);
  return {d * (d - 4) * (d - 4), d * (d * d - 4 * d + 6)};
}

inline Rational specialize(const LeadingForm& f, const ChernNumbers& cn) {
  return (f.c1sq * cn.c1sq + f.c2 * cn.c2).constant_value();
}
inline RationalPoly specialize_poly(const LeadingForm& f, const ChernNumbers& cn) {
  return f.c1sq * cn.c1sq + f.c2 * cn.c2;
}
/// Substitutes the degree-d Chern polynomials; the result is a polynomial in `var`.
inline RationalPoly specialize_symbolic(const LeadingForm& f, const std::string& var = "d") {
  auto [c1sq, c2] = chern_polys_surface(var);
  return f.c1sq * c1sq + f.c2 * c2;
}

/// Element of H^even(X_k) for the Demailly-Semple tower over a surface X.
///
/// Generators: c1 (degree 1), c2 (degree 2) pulled back from X, and
/// u_1..u_k with u_j = c_1(O_j(1)). Coefficients are polynomials in index
/// symbols, so a single class stands for a whole family of bundles.
class CohomClass {
public:
  // exponents of (c1, c2, u_1, ..., u_kMaxTowerLevel)
  using Monomial = std::array<int, 2 + kMaxTowerLevel>;

  CohomClass() = default;
  explicit CohomClass(int level) : level_(check_level(level)) {}
  CohomClass(int level, const RationalPoly& scalar) : level_(check_level(level)) {
    if (!scalar.is_zero()) terms_.emplace(Monomial{}, scalar);
  }

  static CohomClass c1(int level = 0) { return generator(level, 0); }
  static CohomClass c2(int level = 0) { return generator(level, 1); }
  static CohomClass u(int j) {
    if (j < 1) throw unsupported_level("u_j needs j >= 1");
    return generator(j, 1 + j);
  }

  int level() const { return level_; }
  int dimension() const { return 2 + level_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, RationalPoly>& terms() const { return terms_; }

  /// Coefficient of one monomial (zero if absent).
  RationalPoly coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? RationalPoly() : it->second;
  }

  CohomClass at_level(int level) const {
    if (level < level_) throw unsupported_level("cannot push a class down by relabelling");
    CohomClass r = *this;
    r.level_ = check_level(level);
    return r;
  }

  CohomClass& operator+=(const CohomClass& o) {
    level_ = std::max(level_, o.level_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  CohomClass& operator-=(const CohomClass& o) {
    level_ = std::max(level_, o.level_);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  CohomClass& operator*=(const RationalPoly& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend CohomClass operator+(CohomClass a, const CohomClass& b) { return a += b; }
  friend CohomClass operator-(CohomClass a, const CohomClass& b) { return a -= b; }
  friend CohomClass operator-(CohomClass a) { return a *= RationalPoly(-1); }
  friend CohomClass operator*(CohomClass a, const RationalPoly& s) { return a *= s; }
  friend CohomClass operator*(const RationalPoly& s, CohomClass a) { return a *= s; }

  /// Raw product; call reduce() to get the normal form.
  friend CohomClass operator*(const CohomClass& a, const CohomClass& b) {
    CohomClass r(std::max(a.level_, b.level_));
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m{};
        for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        if (r.vanishes(m)) continue;
        r.add_term(m, ca * cb);
      }
    return r;
  }

  friend bool operator==(const CohomClass& a, const CohomClass& b) {
    return a.terms_ == b.terms_;
  }

  static int complex_degree(const Monomial& m) {
    int d = m[0] + 2 * m[1];
    for (size_t i = 2; i < m.size(); ++i) d += m[i];
    return d;
  }
  static int base_degree(const Monomial& m) { return m[0] + 2 * m[1]; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + c.str() + ")";
      auto put = [&](const std::string& g, int e) {
        if (e == 0) return;
        out += "*" + g;
        if (e > 1) out += "^" + std::to_string(e);
      };
      put("c1", m[0]);
      put("c2", m[1]);
      for (int j = 1; j <= kMaxTowerLevel; ++j) put("u" + std::to_string(j), m[static_cast<size_t>(1 + j)]);
    }
    return out;
  }

  // Classes above dim X_k, or above dim X on the base, vanish.
  bool vanishes(const Monomial& m) const {
    return base_degree(m) > 2 || complex_degree(m) > dimension();
  }
  void add_term(const Monomial& m, const RationalPoly& c) {
    if (c.is_zero() || vanishes(m)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

private:
  static int check_level(int level) {
    if (level < 0 || level > kMaxTowerLevel)
      throw unsupported_level("tower level " + std::to_string(level) + " outside 0.." +
                              std::to_string(kMaxTowerLevel));
    return level;
  }
  static CohomClass generator(int level, size_t slot) {
    CohomClass r(level);
    Monomial m{};
    m[slot] = 1;
    r.terms_.emplace(m, RationalPoly(1));
    return r;
  }
  int level_ = 0;
  std::map<Monomial, RationalPoly> terms_;
};

namespace detail {

// (c1(V_{j-1}), c2(V_{j-1})) for j = 1..kMaxTowerLevel, index j-1
using RelationRows = std::vector<std::pair<CohomClass, CohomClass>>;

inline CohomClass reduce_with(const CohomClass& x, const RelationRows& rows) {
  CohomClass out(x.level());
  std::vector<std::pair<CohomClass::Monomial, RationalPoly>> work(x.terms().begin(), x.terms().end());
  while (!work.empty()) {
    auto [m, c] = std::move(work.back());
    work.pop_back();
    int j = 0;
    for (int i = kMaxTowerLevel; i >= 1; --i)
      if (m[static_cast<size_t>(1 + i)] >= 2) {
        j = i;
        break;
      }
    if (j == 0) {
      out.add_term(m, c);
      continue;
    }
    if (static_cast<size_t>(j) > rows.size()) throw unsupported_level("no relation for u_" + std::to_string(j));
    m[static_cast<size_t>(1 + j)] -= 2;
    const auto& [a, b] = rows[static_cast<size_t>(j - 1)];
    // u_j^2 -> -a u_j - b
    for (const auto& [ma, ca] : a.terms()) {
      CohomClass::Monomial t{};
      for (size_t i = 0; i < t.size(); ++i) t[i] = m[i] + ma[i];
      t[static_cast<size_t>(1 + j)] += 1;
      if (out.vanishes(t)) continue;
      work.emplace_back(t, -(c * ca));
    }
    for (const auto& [mb, cb] : b.terms()) {
      CohomClass::Monomial t{};
      for (size_t i = 0; i < t.size(); ++i) t[i] = m[i] + mb[i];
      if (out.vanishes(t)) continue;
      work.emplace_back(t, -(c * cb));
    }
  }
  return out;
}

inline const RelationRows& relation_rows() {
  static const RelationRows rows = [] {
    RelationRows t;
    // V_0 = T_X
    CohomClass c1v = CohomClass::c1(0);
    CohomClass c2v = CohomClass::c2(0);
    t.emplace_back(c1v, c2v);
    for (int j = 1; j < kMaxTowerLevel; ++j) {
      // 0 -> T_{j,j-1} -> V_j -> O_j(-1) -> 0 with c1(T_{j,j-1}) = c1(V_{j-1}) + 2u_j
      CohomClass uj = CohomClass::u(j);
      CohomClass rel_tangent = c1v.at_level(j) + uj * RationalPoly(2);
      CohomClass next_c2 = reduce_with(-(uj * rel_tangent), t);
      c1v = (c1v + uj).at_level(j);
      c2v = next_c2;
      t.emplace_back(c1v, c2v);
    }
    return t;
  }();
  return rows;
}

}  // namespace detail

/// Normal form: every u_j has exponent <= 1, using
/// u_j^2 = -c1(V_{j-1}) u_j - c2(V_{j-1}), highest index first.
inline CohomClass reduce(const CohomClass& x) { return detail::reduce_with(x, detail::relation_rows()); }

/// (c1(V_{j-1}), c2(V_{j-1})) in normal form: the coefficients of the
/// relation u_j^2 + c1(V_{j-1}) u_j + c2(V_{j-1}) = 0.
inline std::pair<CohomClass, CohomClass> relation_classes(int j) {
  if (j < 1 || j > kMaxTowerLevel)
    throw unsupported_level("relation level " + std::to_string(j) + " outside 1.." +
                            std::to_string(kMaxTowerLevel));
  return detail::relation_rows()[static_cast<size_t>(j - 1)];
}

/// Push-forward to a point: peel off u_k, ..., u_1 (each fibre integral of
/// u_j is 1) and read the c1^2, c2 coefficients on the surface.
inline LeadingForm integrate(const CohomClass& x) {
  CohomClass nf = reduce(x);
  CohomClass::Monomial top_c1sq{}, top_c2{};
  top_c1sq[0] = 2;
  top_c2[1] = 1;
  for (int j = 1; j <= nf.level(); ++j) {
    top_c1sq[static_cast<size_t>(1 + j)] = 1;
    top_c2[static_cast<size_t>(1 + j)] = 1;
  }
  return {nf.coefficient(top_c1sq), nf.coefficient(top_c2)};
}

}  // namespace jetbig
