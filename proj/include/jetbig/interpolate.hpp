#pragma once

#include "jetbig/ratpoly.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jetbig {

/// Sampled data is not polynomial of the claimed degree (or period).
class fit_failure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline RationalPoly newton_interpolant(const std::vector<std::pair<Rational, Rational>>& pts,
                                       const std::string& var) {
  const size_t m = pts.size();
  std::vector<Rational> coef(m);
  for (size_t i = 0; i < m; ++i) coef[i] = pts[i].second;
  for (size_t level = 1; level < m; ++level)
    for (size_t i = m - 1; i >= level; --i)
      coef[i] = (coef[i] - coef[i - 1]) / (pts[i].first - pts[i - level].first);
  RationalPoly x = RationalPoly::var(var);
  RationalPoly out = coef[m - 1];
  for (size_t i = m - 1; i-- > 0;) out = out * (x - RationalPoly(pts[i].first)) + RationalPoly(coef[i]);
  return out;
}

inline RationalPoly lagrange_basis(const std::vector<Rational>& nodes, size_t which,
                                   const std::string& var) {
  RationalPoly x = RationalPoly::var(var);
  RationalPoly out(1);
  for (size_t j = 0; j < nodes.size(); ++j) {
    if (j == which) continue;
    out *= (x - RationalPoly(nodes[j]));
    out *= Rational(1) / (nodes[which] - nodes[j]);
  }
  return out;
}

}  // namespace detail

/// Interpolates samples (x, y) by a polynomial of degree <= degree_bound in `var`.
///
/// The first degree_bound+1 samples determine the polynomial; every further
/// sample is checked exactly and a mismatch raises fit_failure.
inline RationalPoly fit_univariate(const std::vector<std::pair<Rational, Rational>>& samples,
                                   int degree_bound, const std::string& var = "n") {
  if (samples.empty()) throw std::invalid_argument("fit_univariate: no samples");
  if (degree_bound < 0) throw std::invalid_argument("fit_univariate: negative degree bound");
  const auto need = static_cast<size_t>(degree_bound) + 1;
  if (samples.size() < need)
    throw std::invalid_argument("fit_univariate: need " + std::to_string(need) + " samples, got " +
                                std::to_string(samples.size()));
  std::vector<Rational> xs;
  for (const auto& s : samples) xs.push_back(s.first);
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw std::invalid_argument("fit_univariate: repeated abscissa");

  std::vector<std::pair<Rational, Rational>> head(samples.begin(), samples.begin() + static_cast<long>(need));
  RationalPoly p = detail::newton_interpolant(head, var);
  for (size_t i = need; i < samples.size(); ++i) {
    Rational got = p.eval({{var, samples[i].first}});
    if (got != samples[i].second)
      throw fit_failure("fit_univariate: sample at " + samples[i].first.str() + " is " +
                        samples[i].second.str() + " but degree-" + std::to_string(degree_bound) +
                        " interpolant gives " + got.str());
  }
  return p;
}

/// A point of a sampling grid: one coordinate per symbol, in symbol order.
using GridPoint = std::vector<Rational>;

/// Tensor-product interpolation over a sampled grid.
///
/// `degrees` lists (symbol, degree bound) pairs; grid points carry coordinates in
/// that order. For each symbol the smallest degree+1 distinct coordinates are the
/// interpolation nodes and the full tensor grid over them must be present. Every
/// other grid point is a held-out check, and each symbol needs at least one
/// held-out point off its node set.
inline RationalPoly fit_multiparameter(const std::map<GridPoint, Rational>& grid,
                                       const std::vector<std::pair<std::string, int>>& degrees,
                                       bool require_holdout = true) {
  const size_t dims = degrees.size();
  if (grid.empty()) throw std::invalid_argument("fit_multiparameter: empty grid");
  if (dims == 0) throw std::invalid_argument("fit_multiparameter: no symbols");
  std::vector<std::vector<Rational>> nodes(dims);
  for (size_t d = 0; d < dims; ++d) {
    std::set<Rational> vals;
    for (const auto& [pt, v] : grid) {
      if (pt.size() != dims) throw std::invalid_argument("fit_multiparameter: grid point arity");
      vals.insert(pt[d]);
    }
    const auto need = static_cast<size_t>(degrees[d].second) + 1;
    if (vals.size() < need)
      throw std::invalid_argument("fit_multiparameter: symbol '" + degrees[d].first + "' needs " +
                                  std::to_string(need) + " distinct values");
    nodes[d].assign(vals.begin(), std::next(vals.begin(), static_cast<long>(need)));
  }

  std::vector<std::vector<RationalPoly>> basis(dims);
  for (size_t d = 0; d < dims; ++d)
    for (size_t i = 0; i < nodes[d].size(); ++i)
      basis[d].push_back(detail::lagrange_basis(nodes[d], i, degrees[d].first));

  RationalPoly out;
  std::vector<size_t> idx(dims, 0);
  while (true) {
    GridPoint pt(dims);
    RationalPoly term(1);
    for (size_t d = 0; d < dims; ++d) {
      pt[d] = nodes[d][idx[d]];
      term *= basis[d][idx[d]];
    }
    auto it = grid.find(pt);
    if (it == grid.end()) throw std::invalid_argument("fit_multiparameter: tensor grid is incomplete");
    out += term * it->second;
    size_t d = 0;
    while (d < dims && ++idx[d] == nodes[d].size()) idx[d++] = 0;
    if (d == dims) break;
  }

  std::vector<bool> held(dims, false);
  for (const auto& [pt, v] : grid) {
    bool on_nodes = true;
    Assignment at;
    for (size_t d = 0; d < dims; ++d) {
      at[degrees[d].first] = pt[d];
      if (std::find(nodes[d].begin(), nodes[d].end(), pt[d]) == nodes[d].end()) {
        on_nodes = false;
        held[d] = true;
      }
    }
    if (on_nodes) continue;
    Rational got = out.eval(at);
    if (got != v) throw fit_failure("fit_multiparameter: held-out point mismatch (" + got.str() + " vs " + v.str() + ")");
  }
  if (require_holdout)
    for (size_t d = 0; d < dims; ++d)
      if (!held[d])
        throw std::invalid_argument("fit_multiparameter: no held-out point for symbol '" + degrees[d].first + "'");
  return out;
}

}  // namespace jetbig
