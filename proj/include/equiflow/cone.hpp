#pragma once

// Decomposition of a direction over a root system: subdivide the starting
// cone until it contains no root besides its own generators, then read the
// coefficients off. The resulting directions have pairwise nonnegative
// inner products.

#include <optional>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace equiflow {

struct ConeDecomposition {
  std::vector<Vec> directions;       // unit roots, pairwise <.,.> >= 0
  std::vector<double> coefficients;  // strictly positive

  Vec reconstruct(int dim) const {
    Vec x = Vec::zero(dim);
    for (size_t i = 0; i < directions.size(); ++i)
      x = x + coefficients[i] * directions[i];
    return x;
  }
};

namespace detail {

// Coefficients of x over the (independent) generators, or nullopt when x is
// outside their span. Solved through the Gram matrix, padded to 3x3.
inline std::optional<std::vector<double>> span_coords(
    const std::vector<Vec>& gens, const Vec& x) {
  int p = static_cast<int>(gens.size());
  Mat G = Mat::identity(3);
  G.d = 3;
  Vec rhs(3);
  for (int i = 0; i < p; ++i) {
    rhs[i] = dot(gens[static_cast<size_t>(i)], x);
    for (int j = 0; j < p; ++j)
      G(i, j) = dot(gens[static_cast<size_t>(i)], gens[static_cast<size_t>(j)]);
  }
  if (std::abs(det(G)) < 1e-12)
    throw BadParams("cone generators are not linearly independent");
  Vec c = solve(G, rhs);
  Vec rec = Vec::zero(x.d);
  for (int i = 0; i < p; ++i) rec = rec + c[i] * gens[static_cast<size_t>(i)];
  if (norm(rec - x) > 1e-9 * std::max(1.0, norm(x))) return std::nullopt;
  std::vector<double> out(static_cast<size_t>(p));
  for (int i = 0; i < p; ++i) out[static_cast<size_t>(i)] = c[i];
  return out;
}

inline bool cone_contains(const std::vector<Vec>& gens, const Vec& x,
                          std::vector<double>* coeffs = nullptr,
                          double tol = 1e-12) {
  std::optional<std::vector<double>> c = span_coords(gens, x);
  if (!c) return false;
  for (double ci : *c)
    if (ci < -tol) return false;
  if (coeffs) *coeffs = *c;
  return true;
}

}  // namespace detail

// rho must lie in the cone spanned by base (nonnegative coefficients). The
// cone is split on the first root of N found strictly inside it; among the
// subcones containing rho the lowest-index one is taken.
inline ConeDecomposition cone_partition(const Vec& rho, std::vector<Vec> base,
                                        const std::vector<Vec>& roots) {
  if (base.empty()) throw BadParams("cone_partition needs at least one generator");
  std::vector<double> alpha;
  if (!detail::cone_contains(base, rho, &alpha))
    throw NotInCone("direction is not inside the starting cone");

  int guard = static_cast<int>(roots.size()) + static_cast<int>(base.size()) + 8;
  for (int it = 0; it < guard; ++it) {
    // first root interior to the current cone (>= 2 strictly positive
    // coefficients; a single positive coefficient would make it a generator)
    int hit = -1;
    std::vector<double> hc;
    for (size_t k = 0; k < roots.size() && hit < 0; ++k) {
      const Vec& nu = roots[k];
      bool is_gen = false;
      for (const Vec& g : base)
        if (approx_eq(g, nu)) is_gen = true;
      if (is_gen) continue;
      std::optional<std::vector<double>> c = detail::span_coords(base, nu);
      if (!c) continue;
      int pos = 0;
      bool ok = true;
      for (double ci : *c) {
        if (ci < -1e-12) ok = false;
        if (ci > 1e-9) ++pos;
      }
      if (ok && pos >= 2) {
        hit = static_cast<int>(k);
        hc = *c;
      }
    }
    if (hit < 0) break;
    const Vec& nu = roots[static_cast<size_t>(hit)];
    bool placed = false;
    for (size_t i = 0; i < base.size() && !placed; ++i) {
      if (hc[i] <= 1e-9) continue;  // subcones exist only where nu has weight
      std::vector<Vec> cand = base;
      cand[i] = nu;
      if (detail::cone_contains(cand, rho, &alpha)) {
        base = std::move(cand);
        placed = true;
      }
    }
    if (!placed)
      throw Error("cone subdivision lost the target direction");
  }

  ConeDecomposition out;
  for (size_t i = 0; i < base.size(); ++i) {
    if (alpha[i] <= 1e-11) continue;  // drop rays rho does not touch
    out.directions.push_back(base[i]);
    out.coefficients.push_back(alpha[i]);
  }
  return out;
}

}  // namespace equiflow
