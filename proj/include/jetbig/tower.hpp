#pragma once

#include "jetbig/cohomology.hpp"
#include "jetbig/region.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetbig {

/// K_X^e tensored with O_1(a_1) ... O_j(a_j) on X_j. Exponents may be
/// polynomials in index symbols.
struct LineBundleSpec {
  int level = 0;
  RationalPoly kx_exponent;
  std::vector<RationalPoly> weights;  // a_1..a_level

  static LineBundleSpec trivial(int level) { return {level, {}, std::vector<RationalPoly>(static_cast<size_t>(level))}; }

  /// O_j(1) on X_j.
  static LineBundleSpec tautological(int j) {
    auto s = trivial(j);
    s.weights.back() = 1;
    return s;
  }

  /// Weights listed for the top levels: {a_{L-r+1}, ..., a_L}; lower levels get 0.
  static LineBundleSpec with_top_weights(int level, const std::vector<RationalPoly>& top) {
    if (static_cast<int>(top.size()) > level) throw std::invalid_argument("more weights than tower levels");
    auto s = trivial(level);
    std::copy(top.begin(), top.end(), s.weights.end() - static_cast<long>(top.size()));
    return s;
  }

  static LineBundleSpec canonical(int level) {
    auto s = trivial(level);
    s.kx_exponent = 1;
    return s;
  }

  /// det V_j^* = K_X (x) O_1(-1) ... O_j(-1), seen on X_level; det V_0^* = K_X.
  static LineBundleSpec det_dual(int j, int level) {
    if (j > level) throw std::invalid_argument("det V_j^* lives on X_j or above");
    auto s = canonical(level);
    for (int i = 0; i < j; ++i) s.weights[static_cast<size_t>(i)] = -1;
    return s;
  }

  /// T_{j,j-1}^* = det V_{j-1}^* (x) O_j(-2), on X_j.
  static LineBundleSpec relative_cotangent(int j) {
    auto s = det_dual(j - 1, j);
    s.weights.back() = -2;
    return s;
  }

  LineBundleSpec lifted(int to) const {
    if (to < level) throw std::invalid_argument("cannot lift a bundle to a lower level");
    LineBundleSpec s = *this;
    s.level = to;
    s.weights.resize(static_cast<size_t>(to));
    return s;
  }

  /// Tensor product; the result lives on the higher of the two levels.
  friend LineBundleSpec operator*(const LineBundleSpec& a, const LineBundleSpec& b) {
    int lvl = std::max(a.level, b.level);
    LineBundleSpec x = a.lifted(lvl), y = b.lifted(lvl);
    x.kx_exponent += y.kx_exponent;
    for (size_t i = 0; i < x.weights.size(); ++i) x.weights[i] += y.weights[i];
    return x;
  }

  /// Tensor power (exponent may be symbolic).
  LineBundleSpec power(const RationalPoly& m) const {
    LineBundleSpec s = *this;
    s.kx_exponent *= m;
    for (auto& w : s.weights) w *= m;
    return s;
  }

  LineBundleSpec partial_eval(const Assignment& at) const {
    LineBundleSpec s = *this;
    s.kx_exponent = kx_exponent.partial_eval(at);
    for (auto& w : s.weights) w = w.partial_eval(at);
    return s;
  }

  friend bool operator==(const LineBundleSpec&, const LineBundleSpec&) = default;

  std::string str() const {
    std::string out = "O_" + std::to_string(level) + "(";
    for (size_t i = 0; i < weights.size(); ++i) out += (i ? ", " : "") + weights[i].str();
    return out + ") (x) K^(" + kx_exponent.str() + ")";
  }
};

/// c1 = -e c1(X) + sum a_i u_i, since c1(K_X) = -c1(X).
inline CohomClass c1_of(const LineBundleSpec& spec) {
  CohomClass out(spec.level);
  out += CohomClass::c1(spec.level) * (-spec.kx_exponent);
  for (size_t i = 0; i < spec.weights.size(); ++i)
    out += CohomClass::u(static_cast<int>(i) + 1).at_level(spec.level) * spec.weights[i];
  return reduce(out);
}

/// Line bundles indexed by the integer points of a region.
struct GradedFamily {
  std::vector<std::string> index_variables;
  Region region;
  LineBundleSpec member;
};

/// Graded pieces of S^m V_{j}^* (x) twist on X_j, where V_j^* is filtered by
/// O_j(1) and T_{j,j-1}^*: members O_j(m - i) (x) (T_{j,j-1}^*)^i (x) twist for 0 <= i <= m.
inline GradedFamily expand_sym_filtration(int j, const RationalPoly& m, const LineBundleSpec& twist,
                                          const std::string& index = "i") {
  if (j < 1) throw unsupported_level("filtration needs level >= 1");
  if (twist.level > j) throw std::invalid_argument("twist lives above level " + std::to_string(j));
  RationalPoly i = RationalPoly::var(index);
  GradedFamily f;
  f.index_variables = {index};
  f.region.between(index, 0, m);
  LineBundleSpec head = LineBundleSpec::tautological(j).power(m - i);
  f.member = head * LineBundleSpec::relative_cotangent(j).power(i) * twist;
  return f;
}

class non_effective_weight : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Parameter values at which push_to_base_family spot-checks effectivity.
struct EffectivitySamples {
  std::vector<long> n_values{1, 2, 3, 5, 8};
  std::vector<long> other_values{3, 4, 5, 6};  // for any other free parameter (c, d, ...)
};

namespace detail {

inline void check_nonnegative(const RationalPoly& m, const Region& region, const Assignment& fixed,
                              const std::string& n_var, const EffectivitySamples& samples, int stage_level) {
  std::set<std::string> free = region.parameters();
  for (const auto& v : m.variables())
    if (std::find(region.variables.begin(), region.variables.end(), v) == region.variables.end()) free.insert(v);
  std::vector<std::string> others;
  for (const auto& v : free)
    if (v != n_var && !fixed.count(v)) others.push_back(v);
  std::vector<Assignment> points;
  for (long n : samples.n_values) {
    Assignment base = fixed;
    base[n_var] = Rational(n);
    std::vector<Assignment> grid{base};
    for (const auto& o : others) {
      std::vector<Assignment> next;
      for (const auto& g : grid)
        for (long v : samples.other_values) {
          Assignment a = g;
          a[o] = Rational(v);
          next.push_back(a);
        }
      grid = std::move(next);
    }
    points.insert(points.end(), grid.begin(), grid.end());
  }
  for (const auto& at : points) {
    RationalPoly mm = m.partial_eval(at);
    enumerate_region(region, at, [&](const std::vector<int64_t>& x) {
      Assignment pt;
      for (size_t i = 0; i < x.size(); ++i) pt[region.variables[i]] = Rational(static_cast<long>(x[i]));
      Rational v = mm.eval(pt);
      if (v.sign() < 0 || !v.is_integer())
        throw non_effective_weight("O_" + std::to_string(stage_level) + " weight " + m.str() + " is " + v.str() +
                                   " at an index point; the push-forward identity needs it to be a nonnegative integer");
    });
  }
}

}  // namespace detail

/// Pushes O_L(a_1, ..., a_L) (x) K^e down to X_target through the graded
/// pieces of the symmetric powers S^{a_j} V_{j-1}^*. Index variables are
/// named from `indices` in the order the stages are taken.
///
/// weights are right-aligned: {2n, n} on level 3 means a_2 = 2n, a_3 = n.
inline GradedFamily push_to_base_family(int tower_level, const std::vector<RationalPoly>& top_weights,
                                        int target_level = 1, const Assignment& fixed = {},
                                        const std::vector<std::string>& indices = {"k", "l", "j", "i", "h"},
                                        const std::string& n_var = "n", const EffectivitySamples& samples = {}) {
  if (tower_level < 1 || tower_level > kMaxTowerLevel) throw unsupported_level("tower level out of range");
  if (target_level < 1 || target_level > tower_level) throw std::invalid_argument("target level must be in 1..tower level");
  if (static_cast<size_t>(tower_level - target_level) > indices.size())
    throw std::invalid_argument("not enough index names");
  GradedFamily fam;
  fam.member = LineBundleSpec::with_top_weights(tower_level, top_weights);
  size_t stage = 0;
  for (int lvl = tower_level; lvl > target_level; --lvl, ++stage) {
    RationalPoly m = fam.member.weights.back();
    detail::check_nonnegative(m, fam.region, fixed, n_var, samples, lvl);
    LineBundleSpec rest = fam.member;
    rest.weights.pop_back();
    rest.level = lvl - 1;
    auto piece = expand_sym_filtration(lvl - 1, m, rest, indices[stage]);
    fam.index_variables.push_back(indices[stage]);
    fam.region.variables.push_back(indices[stage]);
    for (const auto& c : piece.region.constraints) fam.region.constraints.push_back(c);
    fam.member = piece.member;
  }
  return fam;
}

enum class H2Kind { Vanish, R1Case, Boundary };

inline const char* to_string(H2Kind k) {
  switch (k) {
    case H2Kind::Vanish: return "VANISH";
    case H2Kind::R1Case: return "R1_CASE";
    case H2Kind::Boundary: return "BOUNDARY";
  }
  return "?";
}

/// For R1Case, h^2 of the piece equals h^1(S^p T_X^* (x) K_X^q).
struct H2Class {
  H2Kind kind = H2Kind::Boundary;
  Rational p, q;
  friend bool operator==(const H2Class&, const H2Class&) = default;
};

/// h^0(S^a T_X^* (x) K_X^t) = 0 on a smooth degree-d surface (d >= 3) when
/// t(d-4) <= a. For a = 0 the sheaf is K_X^t itself, which has no sections
/// only when t(d-4) < 0. A false result means "not known to vanish".
inline bool bogomolov_h0_vanishes(const Rational& a, const Rational& t, long d) {
  if (d < 3) throw std::invalid_argument("vanishing criterion needs a non-quadric surface (d >= 3)");
  Rational lhs = t * Rational(d - 4);
  if (a.is_zero()) return lhs.sign() < 0;
  return lhs <= a;
}

/// Classifies h^2 of O_1(s) (x) K_X^e on X_1 over a degree-d surface.
inline H2Class classify_h2_piece(const Rational& s, const Rational& e, long d) {
  if (s == Rational(-1)) return {H2Kind::Vanish, 0, 0};
  if (s <= Rational(-2)) return {H2Kind::R1Case, -s - 2, e + s + 1};
  if (e >= Rational(2) || (s >= Rational(1) && e >= Rational(1))) return {H2Kind::Vanish, 0, 0};
  // Serre dual: h^2 = h^0(S^s T_X^* (x) K^(1-e-s)) via the twist by K_{X_1}.
  if (bogomolov_h0_vanishes(s, Rational(1) - e - s, d)) return {H2Kind::Vanish, 0, 0};
  return {H2Kind::Boundary, 0, 0};
}

/// R^1 pi_* of O_1(s) (x) K^e for s <= -2, as S^m T_X (x) K^t with its T_X^* form.
struct SurfaceBundle {
  Rational sym_power;       // of T_X
  Rational k_twist;         // K_X exponent alongside S^m T_X
  Rational dual_sym_power;  // of T_X^*
  Rational dual_k_twist;    // K_X exponent alongside S^m T_X^*
};

inline SurfaceBundle r1_direct_image(const Rational& s, const Rational& e) {
  if (s > Rational(-2)) throw std::domain_error("R^1 direct image needs fibre weight <= -2, got " + s.str());
  Rational m = -s - 2;
  // T_X = T_X^* (x) K^-1 for rank 2, so S^m T_X = S^m T_X^* (x) K^-m
  return {m, e - 1, m, e - 1 - m};
}

struct ClassCounts {
  size_t vanish = 0;
  size_t r1 = 0;
  size_t boundary = 0;
  size_t total() const { return vanish + r1 + boundary; }
};

/// Classifies every member of a family on X_1 at fixed parameter values.
inline ClassCounts classify_family(const GradedFamily& fam, const Assignment& at, long d) {
  if (fam.member.level != 1) throw unsupported_level("classification is for families on X_1");
  ClassCounts counts;
  RationalPoly s = fam.member.weights.front().partial_eval(at);
  RationalPoly e = fam.member.kx_exponent.partial_eval(at);
  enumerate_region(fam.region, at, [&](const std::vector<int64_t>& x) {
    Assignment pt;
    for (size_t i = 0; i < x.size(); ++i) pt[fam.region.variables[i]] = Rational(static_cast<long>(x[i]));
    switch (classify_h2_piece(s.eval(pt), e.eval(pt), d).kind) {
      case H2Kind::Vanish: ++counts.vanish; break;
      case H2Kind::R1Case: ++counts.r1; break;
      case H2Kind::Boundary: ++counts.boundary; break;
    }
  });
  return counts;
}

}  // namespace jetbig
