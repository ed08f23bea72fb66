#pragma once

#include "jetbig/rational.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jetbig {

class missing_variable : public std::invalid_argument {
public:
  explicit missing_variable(const std::string& name)
      : std::invalid_argument("no value assigned to variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

using Assignment = std::map<std::string, Rational>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Canonical form: the variable list is the sorted set of symbols that actually
/// occur, no zero coefficient is stored, and terms are kept in graded
/// lexicographic order (highest first). Two equal polynomials therefore have
/// identical representations and identical text.
class RationalPoly {
public:
  using Monomial = std::vector<int>;

  struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
      int da = 0, db = 0;
      for (int e : a) da += e;
      for (int e : b) db += e;
      if (da != db) return da > db;
      return a > b;
    }
  };
  using TermMap = std::map<Monomial, Rational, GrlexGreater>;

  RationalPoly() = default;
  RationalPoly(const Rational& c) {  // NOLINT: constants promote implicitly
    if (!c.is_zero()) terms_.emplace(Monomial{}, c);
  }
  RationalPoly(long c) : RationalPoly(Rational(c)) {}  // NOLINT
  RationalPoly(int c) : RationalPoly(Rational(c)) {}   // NOLINT

  static RationalPoly var(const std::string& name, int exponent = 1) {
    RationalPoly p;
    p.vars_ = {name};
    p.terms_.emplace(Monomial{exponent}, Rational(1));
    p.normalize();
    return p;
  }

  const std::vector<std::string>& variables() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return vars_.empty(); }
  bool has_variable(std::string_view name) const {
    return std::binary_search(vars_.begin(), vars_.end(), name);
  }

  /// Value of a constant polynomial.
  Rational constant_value() const {
    if (!is_constant()) throw std::domain_error("polynomial is not constant: " + str());
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  int total_degree() const {
    int best = -1;
    for (const auto& [m, c] : terms_) best = std::max(best, monomial_degree(m));
    return best;
  }
  int degree_in(std::string_view name) const {
    int i = index_of(name);
    if (i < 0) return is_zero() ? -1 : 0;
    int best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, m[static_cast<size_t>(i)]);
    return best;
  }
  /// Total degree counted only over `subset` (variables outside it count 0).
  int degree_over(const std::set<std::string>& subset) const {
    int best = -1;
    for (const auto& [m, c] : terms_) best = std::max(best, partial_degree(m, subset));
    return best;
  }

  RationalPoly& operator+=(const RationalPoly& o) { return accumulate(o, Rational(1)); }
  RationalPoly& operator-=(const RationalPoly& o) { return accumulate(o, Rational(-1)); }
  RationalPoly& operator*=(const RationalPoly& o) { return *this = *this * o; }
  RationalPoly& operator*=(const Rational& c) {
    if (c.is_zero()) {
      *this = RationalPoly();
      return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
  }

  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator-(RationalPoly a) { return a *= Rational(-1); }
  friend RationalPoly operator*(RationalPoly a, const Rational& c) { return a *= c; }
  friend RationalPoly operator*(const Rational& c, RationalPoly a) { return a *= c; }
  friend RationalPoly operator*(RationalPoly a, long c) { return a *= Rational(c); }
  friend RationalPoly operator*(long c, RationalPoly a) { return a *= Rational(c); }
  friend RationalPoly operator*(RationalPoly a, int c) { return a *= Rational(c); }
  friend RationalPoly operator*(int c, RationalPoly a) { return a *= Rational(c); }
  friend RationalPoly operator/(RationalPoly a, const Rational& c) {
    return a *= (Rational(1) / c);
  }

  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    auto vars = merged(a.vars_, b.vars_);
    auto ma = index_map(a.vars_, vars);
    auto mb = index_map(b.vars_, vars);
    RationalPoly r;
    r.vars_ = vars;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Monomial e(vars.size(), 0);
        for (size_t i = 0; i < ea.size(); ++i) e[ma[i]] += ea[i];
        for (size_t i = 0; i < eb.size(); ++i) e[mb[i]] += eb[i];
        auto [it, inserted] = r.terms_.try_emplace(std::move(e), ca * cb);
        if (!inserted) it->second += ca * cb;
      }
    }
    r.normalize();
    return r;
  }

  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  RationalPoly pow(unsigned e) const {
    RationalPoly r(1), base = *this;
    while (e) {
      if (e & 1U) r *= base;
      e >>= 1U;
      if (e) base *= base;
    }
    return r;
  }

  /// Exact value; every variable must be assigned.
  Rational eval(const Assignment& at) const {
    std::vector<const Rational*> vals;
    for (const auto& v : vars_) {
      auto it = at.find(v);
      if (it == at.end()) throw missing_variable(v);
      vals.push_back(&it->second);
    }
    Rational sum;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) t *= jetbig::pow(*vals[i], static_cast<unsigned>(m[i]));
      sum += t;
    }
    return sum;
  }

  /// Substitutes the assigned variables, leaving the others symbolic.
  RationalPoly partial_eval(const Assignment& at) const {
    std::map<std::string, RationalPoly> sub;
    for (const auto& [k, v] : at)
      if (has_variable(k)) sub.emplace(k, RationalPoly(v));
    return substitute(sub);
  }

  /// Simultaneous substitution of polynomials for variables.
  RationalPoly substitute(const std::map<std::string, RationalPoly>& sub) const {
    if (sub.empty()) return *this;
    std::vector<const RationalPoly*> repl(vars_.size(), nullptr);
    bool any = false;
    for (size_t i = 0; i < vars_.size(); ++i) {
      auto it = sub.find(vars_[i]);
      if (it != sub.end()) {
        repl[i] = &it->second;
        any = true;
      }
    }
    if (!any) return *this;
    // powers of each replacement are cached, the expansion is otherwise naive
    std::vector<std::vector<RationalPoly>> powers(vars_.size());
    RationalPoly out;
    for (const auto& [m, c] : terms_) {
      RationalPoly kept;
      kept.vars_ = vars_;
      Monomial rest = m;
      RationalPoly factor(c);
      for (size_t i = 0; i < m.size(); ++i) {
        if (!repl[i] || m[i] == 0) continue;
        rest[i] = 0;
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(RationalPoly(1));
        while (static_cast<int>(pw.size()) <= m[i]) pw.push_back(pw.back() * *repl[i]);
        factor *= pw[static_cast<size_t>(m[i])];
      }
      kept.terms_.emplace(std::move(rest), Rational(1));
      kept.normalize();
      out += kept * factor;
    }
    return out;
  }

  /// Coefficient of name^e, as a polynomial in the remaining variables.
  RationalPoly coefficient(std::string_view name, int e) const {
    int i = index_of(name);
    if (i < 0) return e == 0 ? *this : RationalPoly();
    RationalPoly r;
    r.vars_ = vars_;
    for (const auto& [m, c] : terms_) {
      if (m[static_cast<size_t>(i)] != e) continue;
      Monomial k = m;
      k[static_cast<size_t>(i)] = 0;
      r.terms_.emplace(std::move(k), c);
    }
    r.normalize();
    return r;
  }

  /// Terms whose degree over `subset` equals `degree`.
  RationalPoly homogeneous_part(const std::set<std::string>& subset, int degree) const {
    RationalPoly r;
    r.vars_ = vars_;
    for (const auto& [m, c] : terms_)
      if (partial_degree(m, subset) == degree) r.terms_.emplace(m, c);
    r.normalize();
    return r;
  }

  /// Antiderivative with respect to `name` (zero constant of integration).
  RationalPoly antiderivative(const std::string& name) const {
    RationalPoly base = *this * RationalPoly::var(name);  // ensures the variable slot exists
    int i = base.index_of(name);
    RationalPoly r;
    r.vars_ = base.vars_;
    for (const auto& [m, c] : base.terms_) r.terms_.emplace(m, c / Rational(m[static_cast<size_t>(i)]));
    r.normalize();
    return r;
  }

  /// Canonical text: graded-lex order, coefficients as "num/den" (integers bare),
  /// e.g. "-2/9*c^4 + 10/9*c^3 - 125/72".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational mag = c.sign() < 0 ? -c : c;
      if (first)
        out += c.sign() < 0 ? "-" : "";
      else
        out += c.sign() < 0 ? " - " : " + ";
      out += mag.str();
      for (size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        out += "*" + vars_[i];
        if (m[i] > 1) out += "^" + std::to_string(m[i]);
      }
      first = false;
    }
    return out;
  }

  /// Inverse of str(). Accepts the canonical grammar only.
  static RationalPoly parse(std::string_view text) {
    RationalPoly out;
    size_t pos = 0;
    auto skip = [&] {
      while (pos < text.size() && text[pos] == ' ') ++pos;
    };
    auto fail = [&](const char* what) {
      throw std::invalid_argument(std::string("polynomial parse error (") + what + ") in '" +
                                  std::string(text) + "'");
    };
    skip();
    if (text.substr(pos) == "0") return out;
    int sign = 1;
    if (pos < text.size() && text[pos] == '-') {
      sign = -1;
      ++pos;
    }
    while (true) {
      size_t start = pos;
      while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
        ++pos;
      if (start == pos) fail("coefficient expected");
      RationalPoly term(Rational::parse(text.substr(start, pos - start)) * Rational(sign));
      while (pos < text.size() && text[pos] == '*') {
        ++pos;
        size_t vs = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
          ++pos;
        if (vs == pos) fail("variable expected");
        std::string name(text.substr(vs, pos - vs));
        int e = 1;
        if (pos < text.size() && text[pos] == '^') {
          size_t es = ++pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (es == pos) fail("exponent expected");
          e = std::stoi(std::string(text.substr(es, pos - es)));
        }
        term *= RationalPoly::var(name, e);
      }
      out += term;
      skip();
      if (pos >= text.size()) break;
      if (text[pos] == '+')
        sign = 1;
      else if (text[pos] == '-')
        sign = -1;
      else
        fail("'+' or '-' expected");
      ++pos;
      skip();
    }
    return out;
  }

private:
  static int monomial_degree(const Monomial& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
  }
  int partial_degree(const Monomial& m, const std::set<std::string>& subset) const {
    int d = 0;
    for (size_t i = 0; i < m.size(); ++i)
      if (subset.count(vars_[i])) d += m[i];
    return d;
  }
  int index_of(std::string_view name) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), name);
    if (it == vars_.end() || *it != name) return -1;
    return static_cast<int>(it - vars_.begin());
  }
  static std::vector<std::string> merged(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }
  static std::vector<size_t> index_map(const std::vector<std::string>& from,
                                       const std::vector<std::string>& to) {
    std::vector<size_t> m;
    for (const auto& v : from)
      m.push_back(static_cast<size_t>(std::lower_bound(to.begin(), to.end(), v) - to.begin()));
    return m;
  }
  void relabel(const std::vector<std::string>& vars) {
    if (vars == vars_) return;
    auto m = index_map(vars_, vars);
    TermMap next;
    for (auto& [e, c] : terms_) {
      Monomial k(vars.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) k[m[i]] = e[i];
      next.emplace(std::move(k), std::move(c));
    }
    terms_ = std::move(next);
    vars_ = vars;
  }
  RationalPoly& accumulate(const RationalPoly& o, const Rational& scale) {
    if (o.is_zero()) return *this;
    auto vars = merged(vars_, o.vars_);
    relabel(vars);
    auto m = index_map(o.vars_, vars);
    for (const auto& [e, c] : o.terms_) {
      Monomial k(vars.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) k[m[i]] = e[i];
      auto [it, inserted] = terms_.try_emplace(std::move(k), c * scale);
      if (!inserted) it->second += c * scale;
    }
    normalize();
    return *this;
  }
  // Drops zero terms and unused variables.
  void normalize() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [m, c] : terms_)
      for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) return;
    std::vector<std::string> keep;
    for (size_t i = 0; i < vars_.size(); ++i)
      if (used[i]) keep.push_back(vars_[i]);
    TermMap next;
    for (auto& [m, c] : terms_) {
      Monomial k;
      for (size_t i = 0; i < m.size(); ++i)
        if (used[i]) k.push_back(m[i]);
      next.emplace(std::move(k), std::move(c));
    }
    terms_ = std::move(next);
    vars_ = std::move(keep);
  }

  std::vector<std::string> vars_;
  TermMap terms_;
};

inline std::ostream& operator<<(std::ostream& os, const RationalPoly& p) { return os << p.str(); }

/// Convenience: exact value of `p` at `at`.
inline Rational poly_eval(const RationalPoly& p, const Assignment& at) { return p.eval(at); }

}  // namespace jetbig
