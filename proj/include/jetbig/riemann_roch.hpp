#pragma once

#include "jetbig/tower.hpp"

namespace jetbig {

/// Top Riemann-Roch term c1(L)^N / N! of a line bundle on X_1 (N = 3) or
/// X_2 (N = 4). Only this term reaches the highest power of the twisting
/// parameter.
inline LeadingForm chi_top_term(const LineBundleSpec& spec) {
  if (spec.level != 1 && spec.level != 2)
    throw unsupported_level("top-term evaluation is implemented on X_1 and X_2, not X_" + std::to_string(spec.level));
  CohomClass c = c1_of(spec);
  CohomClass power = c;
  const int dim = spec.level + 2;
  Rational factorial(1);
  for (int i = 2; i <= dim; ++i) {
    power = reduce(power * c);
    factorial *= Rational(i);
  }
  LeadingForm f = integrate(power);
  return {f.c1sq / factorial, f.c2 / factorial};
}

/// Top term of chi(X, S^p T_X^* (x) K_X^q): the same as chi(X_1, O_1(p) (x) K^q).
inline LeadingForm surface_sym_chi_top(const RationalPoly& p, const RationalPoly& q) {
  LineBundleSpec spec = LineBundleSpec::canonical(1).power(q);
  spec.weights[0] = p;
  return chi_top_term(spec);
}

/// chi of S^p T_X^* (x) K^q restricted to a smooth curve in |O_X((d-4)q - p)|.
inline RationalPoly curve_chi_exact(const RationalPoly& p, const RationalPoly& q, const RationalPoly& d) {
  RationalPoly half(Rational(1, 2));
  RationalPoly bracket = (p * half + q) * d * (d - 4) - half * ((q + 1) * (d - 4) - p) * d;
  return (p + 1) * bracket * (q * (d - 4) - p);
}
inline Rational curve_chi_exact(const Rational& p, const Rational& q, const Rational& d) {
  return curve_chi_exact(RationalPoly(p), RationalPoly(q), RationalPoly(d)).constant_value();
}

/// Degree-3 part (in p, q) of curve_chi_exact.
inline RationalPoly curve_chi_leading(const RationalPoly& p, const RationalPoly& q, const RationalPoly& d) {
  RationalPoly half(Rational(1, 2));
  return p * q * (p + q) * half * d * (d - 4) * (d - 4) - p * p * p * half * d * (d - 3);
}
inline Rational curve_chi_leading(const Rational& p, const Rational& q, const Rational& d) {
  return curve_chi_leading(RationalPoly(p), RationalPoly(q), RationalPoly(d)).constant_value();
}

}  // namespace jetbig
