#pragma once

// Node sets for the discretized domains: balls (with Neumann-style masked
// stencils) and period cells of a discrete group's lattice. Two stencils:
// cubic (2n+1 point) and triangular (7 point, 2D). Masks and cell wrapping
// are decided in exact integer arithmetic so that node sets are exactly
// symmetric under the relevant isometries.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "equiflow/errors.hpp"
#include "equiflow/group.hpp"
#include "equiflow/isometry.hpp"
#include "equiflow/linalg.hpp"

namespace equiflow {

enum class StencilKind { Cubic, Triangular };
enum class DomainKind { Ball, Cell };

using Index3 = std::array<int32_t, 3>;
using LIndex3 = std::array<int64_t, 3>;

// Integer-exact action of an isometry on grid indices. exact == false means
// the element does not map nodes to nodes and samplers must interpolate.
struct IndexMap {
  bool exact = false;
  std::array<std::array<int64_t, 3>, 3> M{};
  LIndex3 t{};
};

struct InterpStencil {
  int count = 0;
  std::array<int32_t, 8> node{};
  std::array<double, 8> weight{};
};

namespace gridkey {
constexpr int64_t kBias = 1 << 20;
inline uint64_t pack(const Index3& v) {
  return (uint64_t(v[0] + kBias)) | (uint64_t(v[1] + kBias) << 21) |
         (uint64_t(v[2] + kBias) << 42);
}
}  // namespace gridkey

struct Grid {
  int n = 0;
  double h = 0;
  StencilKind stencil = StencilKind::Cubic;
  DomainKind domain = DomainKind::Ball;
  double R = 0;  // ball radius; unused for cells

  Mat E, Einv;  // columns of E are the step vectors (scaled by h)
  int degree = 0;
  std::array<Index3, 6> dirs{};  // dirs[d + degree/2] == -dirs[d]

  double lap_coef = 0;     // per-neighbor weight 1/h^2 (cubic), 2/(3h^2) (tri)
  double node_volume = 0;  // h^n (cubic), sqrt(3)/2 h^2 (tri)

  // cell only: lattice columns in index coordinates, adjugate, determinant
  std::array<LIndex3, 3> lat{};
  std::array<std::array<int64_t, 3>, 3> lat_adj{};
  int64_t lat_det = 0;
  int lat_rank = 0;

  std::vector<Index3> idx;  // sorted by node coordinates, lexicographically
  std::vector<Vec> pos;
  std::vector<int32_t> nbr;  // size() == idx.size() * degree, -1 where absent
  std::unordered_map<uint64_t, int32_t> lookup;

  int node_count() const { return static_cast<int>(idx.size()); }

  int32_t node_of(const Index3& v) const {
    auto it = lookup.find(gridkey::pack(v));
    return it == lookup.end() ? -1 : it->second;
  }

  Vec position(const Index3& v) const {
    Vec p = Vec::zero(n);
    for (int k = 0; k < n; ++k)
      for (int r = 0; r < n; ++r) p[r] += E(r, k) * v[k];
    return p;
  }

  // continuous index coordinates of a spatial point
  Vec index_coords(const Vec& x) const { return mul(Einv, x); }

  static int64_t floordiv(int64_t a, int64_t b) {  // b > 0
    int64_t q = a / b, r = a % b;
    return r < 0 ? q - 1 : q;
  }

  Index3 wrap(const LIndex3& v) const {
    if (domain == DomainKind::Ball || lat_rank == 0)
      return Index3{int32_t(v[0]), int32_t(v[1]), int32_t(v[2])};
    LIndex3 y{0, 0, 0};
    for (int r = 0; r < lat_rank; ++r)
      for (int c = 0; c < lat_rank; ++c) y[r] += lat_adj[r][c] * v[c];
    LIndex3 out = v;
    for (int j = 0; j < lat_rank; ++j) {
      int64_t m = floordiv(y[j], lat_det);
      if (m == 0) continue;
      for (int r = 0; r < lat_rank; ++r) out[r] -= lat[j][r] * m;
    }
    return Index3{int32_t(out[0]), int32_t(out[1]), int32_t(out[2])};
  }

  int32_t node_at_wrapped(const LIndex3& v) const { return node_of(wrap(v)); }

  IndexMap index_map(const IsometryElement& g, double tol = 1e-9) const {
    IndexMap im;
    Mat M = mul(Einv, mul(g.linear, E));
    Vec t = mul(Einv, g.shift);
    im.exact = true;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        double v = M(r, c);
        int64_t q = llround(v);
        if (std::abs(v - double(q)) > tol) im.exact = false;
        im.M[r][c] = q;
      }
      double v = t[r];
      int64_t q = llround(v);
      if (std::abs(v - double(q)) > tol) im.exact = false;
      im.t[r] = q;
    }
    for (int r = n; r < 3; ++r) im.M[r][r] = 1;
    return im;
  }

  LIndex3 apply_index_map(const IndexMap& im, const Index3& v) const {
    LIndex3 out = im.t;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out[r] += im.M[r][c] * v[c];
    return out;
  }

  // Interpolation stencil at an arbitrary point. Cell points are wrapped;
  // ball points near the rim renormalize over the corners present.
  InterpStencil locate(const Vec& x) const {
    Vec c = index_coords(x);
    InterpStencil st;
    if (stencil == StencilKind::Triangular) {
      double fi = std::floor(c[0]), fj = std::floor(c[1]);
      double a = c[0] - fi, b = c[1] - fj;
      int64_t i0 = int64_t(fi), j0 = int64_t(fj);
      LIndex3 v0, v1, v2;
      double w0, w1, w2;
      if (a + b <= 1.0) {
        v0 = {i0, j0, 0};
        v1 = {i0 + 1, j0, 0};
        v2 = {i0, j0 + 1, 0};
        w0 = 1.0 - a - b;
        w1 = a;
        w2 = b;
      } else {
        v0 = {i0 + 1, j0 + 1, 0};
        v1 = {i0 + 1, j0, 0};
        v2 = {i0, j0 + 1, 0};
        w0 = a + b - 1.0;
        w1 = 1.0 - b;
        w2 = 1.0 - a;
      }
      const LIndex3 vs[3] = {v0, v1, v2};
      const double ws[3] = {w0, w1, w2};
      for (int k = 0; k < 3; ++k) {
        int32_t id = node_at_wrapped(vs[k]);
        if (id >= 0) {
          st.node[st.count] = id;
          st.weight[st.count] = ws[k];
          ++st.count;
        }
      }
    } else {
      LIndex3 base{0, 0, 0};
      double frac[3] = {0, 0, 0};
      for (int k = 0; k < n; ++k) {
        double f = std::floor(c[k]);
        base[k] = int64_t(f);
        frac[k] = c[k] - f;
      }
      int corners = 1 << n;
      for (int mask = 0; mask < corners; ++mask) {
        LIndex3 v = base;
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
          if (mask & (1 << k)) {
            v[k] += 1;
            w *= frac[k];
          } else {
            w *= 1.0 - frac[k];
          }
        }
        if (w == 0.0) continue;
        int32_t id = node_at_wrapped(v);
        if (id >= 0) {
          st.node[st.count] = id;
          st.weight[st.count] = w;
          ++st.count;
        }
      }
    }
    double total = 0;
    for (int k = 0; k < st.count; ++k) total += st.weight[k];
    if (st.count > 0 && total > 1e-14) {
      for (int k = 0; k < st.count; ++k) st.weight[k] /= total;
      return st;
    }
    // fall back to the nearest rounded index if any corner survives
    st.count = 0;
    LIndex3 r{0, 0, 0};
    for (int k = 0; k < n; ++k) r[k] = llround(c[k]);
    int32_t id = node_at_wrapped(r);
    if (id >= 0) {
      st.count = 1;
      st.node[0] = id;
      st.weight[0] = 1.0;
    }
    return st;
  }

  // 0 = node with a missing neighbor, 1 = adjacent to such, 255 = deeper in.
  // Cells have no rim: everything is 255.
  std::vector<uint8_t> boundary_depth() const {
    std::vector<uint8_t> depth(idx.size(), 255);
    if (domain == DomainKind::Cell) return depth;
    int N = node_count();
    for (int i = 0; i < N; ++i)
      for (int d = 0; d < degree; ++d)
        if (nbr[size_t(i) * degree + d] < 0) {
          depth[i] = 0;
          break;
        }
    for (int i = 0; i < N; ++i) {
      if (depth[i] != 0) continue;
      for (int d = 0; d < degree; ++d) {
        int32_t j = nbr[size_t(i) * degree + d];
        if (j >= 0 && depth[j] == 255) depth[j] = 1;
      }
    }
    return depth;
  }
};

namespace detail {

inline void set_stencil_geometry(Grid& g) {
  if (g.stencil == StencilKind::Triangular) {
    if (g.n != 2) throw BadParams("triangular stencil needs dimension 2");
    g.degree = 6;
    g.dirs = {Index3{1, 0, 0}, Index3{0, 1, 0}, Index3{1, -1, 0},
              Index3{-1, 0, 0}, Index3{0, -1, 0}, Index3{-1, 1, 0}};
    g.E = Mat::zero(2);
    g.E(0, 0) = g.h;
    g.E(0, 1) = 0.5 * g.h;
    g.E(1, 1) = 0.5 * std::sqrt(3.0) * g.h;
    g.lap_coef = 2.0 / (3.0 * g.h * g.h);
    g.node_volume = 0.5 * std::sqrt(3.0) * g.h * g.h;
  } else {
    g.degree = 2 * g.n;
    for (int k = 0; k < g.n; ++k) {
      Index3 d{0, 0, 0};
      d[k] = 1;
      g.dirs[k] = d;
      d[k] = -1;
      g.dirs[k + g.n] = d;
    }
    g.E = Mat::identity(g.n);
    for (int k = 0; k < g.n; ++k) g.E(k, k) = g.h;
    g.lap_coef = 1.0 / (g.h * g.h);
    g.node_volume = std::pow(g.h, g.n);
  }
  g.Einv = inverse(g.E);
}

inline void sort_and_index(Grid& g, std::vector<Index3>& nodes) {
  std::vector<Vec> ps(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) ps[i] = g.position(nodes[i]);
  std::vector<int32_t> order(nodes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = int32_t(i);
  std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    for (int k = 0; k < g.n; ++k) {
      if (ps[a][k] < ps[b][k]) return true;
      if (ps[a][k] > ps[b][k]) return false;
    }
    return false;
  });
  g.idx.resize(nodes.size());
  g.pos.resize(nodes.size());
  g.lookup.reserve(nodes.size() * 2);
  for (size_t r = 0; r < order.size(); ++r) {
    g.idx[r] = nodes[order[r]];
    g.pos[r] = ps[order[r]];
    g.lookup.emplace(gridkey::pack(g.idx[r]), int32_t(r));
  }
  int N = g.node_count();
  g.nbr.assign(size_t(N) * g.degree, -1);
  for (int i = 0; i < N; ++i) {
    for (int d = 0; d < g.degree; ++d) {
      LIndex3 v{int64_t(g.idx[i][0]) + g.dirs[d][0],
                int64_t(g.idx[i][1]) + g.dirs[d][1],
                int64_t(g.idx[i][2]) + g.dirs[d][2]};
      int32_t j = g.node_at_wrapped(v);
      if (j == i) throw BadSpacing("lattice too small for spacing h");
      g.nbr[size_t(i) * g.degree + d] = j;
    }
  }
}

inline int64_t tri_norm2(int64_t i, int64_t j) { return i * i + i * j + j * j; }

}  // namespace detail

inline Grid make_ball_grid(int n, double R, double h, StencilKind stencil) {
  if (!(h > 0) || !(R > 0)) throw BadSpacing("R and h must be positive");
  if (R < 2 * h) throw BadSpacing("ball radius must be at least 2h");
  if (n < 1 || n > 3) throw BadParams("dimension must be 1, 2 or 3");
  Grid g;
  g.n = n;
  g.h = h;
  g.R = R;
  g.stencil = stencil;
  g.domain = DomainKind::Ball;
  detail::set_stencil_geometry(g);

  double lim = R * R * (1.0 + 1e-12);
  double h2 = h * h;
  std::vector<Index3> nodes;
  if (stencil == StencilKind::Triangular) {
    int64_t K = int64_t(std::ceil(R / h * 2.0)) + 2;
    for (int64_t i = -K; i <= K; ++i)
      for (int64_t j = -K; j <= K; ++j)
        if (h2 * double(detail::tri_norm2(i, j)) <= lim)
          nodes.push_back(Index3{int32_t(i), int32_t(j), 0});
  } else {
    int64_t K = int64_t(std::ceil(R / h)) + 1;
    if (K >= gridkey::kBias) throw BadSpacing("grid too large");
    int64_t ki = K, kj = n >= 2 ? K : 0, kk = n >= 3 ? K : 0;
    for (int64_t i = -ki; i <= ki; ++i)
      for (int64_t j = -kj; j <= kj; ++j)
        for (int64_t k = -kk; k <= kk; ++k)
          if (h2 * double(i * i + j * j + k * k) <= lim)
            nodes.push_back(Index3{int32_t(i), int32_t(j), int32_t(k)});
  }
  if (nodes.empty()) throw BadSpacing("empty grid");
  detail::sort_and_index(g, nodes);
  return g;
}

// Period cell of a discrete group's translation lattice. The lattice vectors
// must be integer combinations of the step vectors (pick h = 1/q).
inline Grid make_cell_grid(const ReflectionGroup& G, double h,
                           StencilKind stencil) {
  if (!(h > 0)) throw BadSpacing("h must be positive");
  if (G.kind != GroupKind::Discrete || G.lattice.empty())
    throw BadParams("cell grids need a discrete group with a lattice");
  Grid g;
  g.n = G.dim;
  g.h = h;
  g.stencil = stencil;
  g.domain = DomainKind::Cell;
  detail::set_stencil_geometry(g);

  g.lat_rank = int(G.lattice.size());
  if (g.lat_rank != g.n) throw BadParams("lattice rank must match dimension");
  for (int j = 0; j < g.lat_rank; ++j) {
    Vec c = mul(g.Einv, G.lattice[j]);
    for (int r = 0; r < g.n; ++r) {
      int64_t q = llround(c[r]);
      if (std::abs(c[r] - double(q)) > 1e-9)
        throw BadSpacing("h does not divide the lattice");
      g.lat[j][r] = q;
    }
  }
  // determinant and adjugate of the (column) lattice matrix, exact integers
  auto L = [&](int r, int c) { return g.lat[c][r]; };
  int64_t det = 0;
  if (g.n == 1) {
    det = L(0, 0);
    g.lat_adj[0][0] = 1;
  } else if (g.n == 2) {
    det = L(0, 0) * L(1, 1) - L(0, 1) * L(1, 0);
    g.lat_adj[0][0] = L(1, 1);
    g.lat_adj[0][1] = -L(0, 1);
    g.lat_adj[1][0] = -L(1, 0);
    g.lat_adj[1][1] = L(0, 0);
  } else {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        int r1 = (c + 1) % 3, r2 = (c + 2) % 3;  // adj = transposed cofactors
        int c1 = (r + 1) % 3, c2 = (r + 2) % 3;
        g.lat_adj[r][c] = L(r1, c1) * L(r2, c2) - L(r1, c2) * L(r2, c1);
      }
    det = L(0, 0) * g.lat_adj[0][0] + L(0, 1) * g.lat_adj[1][0] +
          L(0, 2) * g.lat_adj[2][0];
  }
  if (det == 0) throw BadParams("lattice is degenerate");
  if (det < 0) {  // flip one basis vector; same lattice, positive determinant
    for (int r = 0; r < 3; ++r) g.lat[0][r] = -g.lat[0][r];
    if (g.n == 1) {
      g.lat_adj[0][0] = 1;
    } else if (g.n == 2) {
      g.lat_adj[0][0] = L(1, 1);
      g.lat_adj[0][1] = -L(0, 1);
      g.lat_adj[1][0] = -L(1, 0);
      g.lat_adj[1][1] = L(0, 0);
    } else if (g.n == 3) {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          int r1 = (c + 1) % 3, r2 = (c + 2) % 3;
          int c1 = (r + 1) % 3, c2 = (r + 2) % 3;
          g.lat_adj[r][c] = L(r1, c1) * L(r2, c2) - L(r1, c2) * L(r2, c1);
        }
    }
    det = -det;
  }
  g.lat_det = det;

  int64_t lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  int corners = 1 << g.lat_rank;
  for (int mask = 0; mask < corners; ++mask) {
    LIndex3 s{0, 0, 0};
    for (int j = 0; j < g.lat_rank; ++j)
      if (mask & (1 << j))
        for (int r = 0; r < g.n; ++r) s[r] += g.lat[j][r];
    for (int r = 0; r < g.n; ++r) {
      lo[r] = std::min(lo[r], s[r]);
      hi[r] = std::max(hi[r], s[r]);
    }
  }
  std::vector<Index3> nodes;
  nodes.reserve(size_t(det));
  int64_t kj0 = g.n >= 2 ? lo[1] : 0, kj1 = g.n >= 2 ? hi[1] : 0;
  int64_t kk0 = g.n >= 3 ? lo[2] : 0, kk1 = g.n >= 3 ? hi[2] : 0;
  for (int64_t i = lo[0]; i <= hi[0]; ++i)
    for (int64_t j = kj0; j <= kj1; ++j)
      for (int64_t k = kk0; k <= kk1; ++k) {
        LIndex3 v{i, j, k};
        Index3 w = g.wrap(v);
        if (w[0] == i && w[1] == j && w[2] == k)
          nodes.push_back(Index3{int32_t(i), int32_t(j), int32_t(k)});
      }
  if (int64_t(nodes.size()) != det)
    throw BadParams("cell enumeration does not match lattice volume");
  detail::sort_and_index(g, nodes);
  return g;
}

// A grid is node compatible with a set of isometries when each of them maps
// nodes to nodes. Used to pick between exact permutation and interpolation.
inline bool node_compatible(const Grid& g,
                            const std::vector<IsometryElement>& elems) {
  for (const IsometryElement& e : elems)
    if (!g.index_map(e).exact) return false;
  return true;
}

// Stencil that makes the group's point action node exact, preferring the
// triangular lattice in 2D when it fits (hexagonal symmetries).
inline StencilKind stencil_for_group(const ReflectionGroup& G) {
  if (G.dim != 2) return StencilKind::Cubic;
  Grid probe;
  probe.n = 2;
  probe.h = 1.0;
  probe.stencil = StencilKind::Triangular;
  detail::set_stencil_geometry(probe);
  for (const IsometryElement& e : G.elements) {
    IsometryElement lin = IsometryElement::identity(2);
    lin.linear = e.linear;
    if (!probe.index_map(lin).exact) return StencilKind::Cubic;
  }
  return StencilKind::Triangular;
}

}  // namespace equiflow
