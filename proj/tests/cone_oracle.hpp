#pragma once

// Brute-force reference for cone decompositions, shared by the unit and
// acceptance suites: enumerate every linearly independent root subset with
// pairwise nonnegative inner products whose positive span hits rho exactly.
// Independent of the production algorithm on purpose.

#include <cmath>
#include <vector>

#include "equiflow/cone.hpp"
#include "equiflow/linalg.hpp"

namespace cone_oracle {

struct Entry {
  std::vector<equiflow::Vec> dirs;
  std::vector<double> coeffs;
};

inline std::vector<double> gram_solve(const std::vector<equiflow::Vec>& gens,
                                      const equiflow::Vec& rho) {
  using namespace equiflow;
  int p = int(gens.size());
  Mat G = Mat::identity(3);
  Vec rhs(3);
  for (int i = 0; i < p; ++i) {
    rhs[i] = dot(gens[size_t(i)], rho);
    for (int j = 0; j < p; ++j) G(i, j) = dot(gens[size_t(i)], gens[size_t(j)]);
  }
  Vec c = solve(G, rhs);
  std::vector<double> out(static_cast<size_t>(p), 0.0);
  for (int i = 0; i < p; ++i) out[size_t(i)] = c[i];
  return out;
}

inline std::vector<Entry> decompositions(const std::vector<equiflow::Vec>& roots,
                                         const equiflow::Vec& rho) {
  using namespace equiflow;
  std::vector<Entry> out;
  int n = int(roots.size());
  int dim = rho.d;
  auto consider = [&](const std::vector<int>& sel) {
    std::vector<Vec> gens;
    for (int i : sel) gens.push_back(roots[size_t(i)]);
    for (size_t a = 0; a < gens.size(); ++a)
      for (size_t b = a + 1; b < gens.size(); ++b)
        if (dot(gens[a], gens[b]) < -1e-12) return;
    Mat G = Mat::identity(3);
    for (size_t a = 0; a < gens.size(); ++a)
      for (size_t b = 0; b < gens.size(); ++b)
        G(int(a), int(b)) = dot(gens[a], gens[b]);
    if (std::abs(det(G)) < 1e-9) return;  // dependent set
    std::vector<double> c = gram_solve(gens, rho);
    Vec rec = Vec::zero(dim);
    for (size_t a = 0; a < gens.size(); ++a) rec = rec + c[a] * gens[a];
    if (norm(rec - rho) > 1e-9) return;
    for (double ci : c)
      if (ci < 1e-9) return;  // want strictly positive coefficients
    out.push_back(Entry{gens, c});
  };
  for (int i = 0; i < n; ++i) {
    consider({i});
    if (dim < 2) continue;
    for (int j = i + 1; j < n; ++j) {
      consider({i, j});
      if (dim < 3) continue;
      for (int k = j + 1; k < n; ++k) consider({i, j, k});
    }
  }
  return out;
}

inline bool matches(const equiflow::ConeDecomposition& dec,
                    const std::vector<Entry>& oracle) {
  using namespace equiflow;
  for (const Entry& e : oracle) {
    if (e.dirs.size() != dec.directions.size()) continue;
    bool all = true;
    for (size_t i = 0; i < dec.directions.size() && all; ++i) {
      bool found = false;
      for (size_t j = 0; j < e.dirs.size(); ++j)
        if (approx_eq(e.dirs[j], dec.directions[i], 1e-8) &&
            std::abs(e.coeffs[j] - dec.coefficients[i]) < 1e-8)
          found = true;
      if (!found) all = false;
    }
    if (all) return true;
  }
  return false;
}

}  // namespace cone_oracle
