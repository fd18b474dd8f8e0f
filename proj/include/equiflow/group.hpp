#pragma once

// Reflection groups: finite ones are stored as their full element list,
// lattice-periodic ones as (point group, translation lattice, fundamental
// domain walls). Element words over the mirror generators are kept so
// homomorphisms can be extended from generator images.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "isometry.hpp"

namespace equiflow {

// Oriented wall {x : <x,normal> = offset}; the fundamental domain sits on the
// side where signed_dist < 0.
struct Wall {
  Vec normal;      // unit, points out of the fundamental domain
  double offset = 0.0;

  double signed_dist(const Vec& x) const { return dot(x, normal) - offset; }
  IsometryElement reflection() const {
    return IsometryElement::reflection(normal, offset);
  }
};

struct Subspace {
  std::vector<Vec> basis;  // orthonormal
  int ambient = 0;

  int dim() const { return static_cast<int>(basis.size()); }
  bool full() const { return dim() == ambient; }
  Vec project(const Vec& x) const {
    Vec p = Vec::zero(ambient);
    for (const Vec& b : basis) p = p + dot(x, b) * b;
    return p;
  }
};

inline bool subspace_eq(const Subspace& A, const Subspace& B, double tol = 1e-7) {
  return A.ambient == B.ambient && spans_equal(A.basis, B.basis, A.ambient, tol);
}

// Fixed-point set of the linear part, ker(A - I).
inline Subspace fixed_subspace(const IsometryElement& g, double tol = 1e-9) {
  Subspace s;
  s.ambient = g.dim;
  s.basis = null_space(g.linear - Mat::identity(g.dim), tol);
  return s;
}

struct FoldResult {
  Vec point;             // representative in the closed fundamental domain
  IsometryElement word;  // word.apply(point) == original x
  int reflections = 0;
};

enum class GroupKind { Finite, Discrete };

class ReflectionGroup {
 public:
  int dim = 0;
  GroupKind kind = GroupKind::Finite;
  std::string name;

  // Mirror generators, one per fundamental-domain wall (affine for Discrete).
  std::vector<IsometryElement> generators;
  std::vector<Wall> walls;  // walls of the fundamental domain, same order

  // Finite: every element. Discrete: the point group (stabilizer of 0).
  std::vector<IsometryElement> elements;
  // Word of each element over point_generators(), composition left-to-right.
  std::vector<std::vector<int>> words;
  // Index into the deduplicated point-generator list for each generator.
  std::vector<int> point_gen_index;

  std::vector<Vec> lattice;  // translation lattice basis (Discrete only)

  int order() const { return static_cast<int>(elements.size()); }

  std::vector<IsometryElement> point_generators() const {
    std::vector<IsometryElement> pg;
    for (size_t i = 0; i < generators.size(); ++i) {
      int k = point_gen_index[i];
      if (k == static_cast<int>(pg.size()))
        pg.push_back(IsometryElement(generators[i].linear, Vec::zero(dim)));
    }
    return pg;
  }

  std::optional<int> find_element(const IsometryElement& g,
                                  double tol = kElemTol) const {
    for (size_t i = 0; i < elements.size(); ++i)
      if (approx_eq(elements[i], g, tol)) return static_cast<int>(i);
    return std::nullopt;
  }

  bool lattice_full_rank() const {
    return static_cast<int>(lattice.size()) == dim;
  }

  // Integer coordinates of v in the lattice basis (least squares so that
  // rank-deficient lattices only reduce the in-span component).
  std::vector<double> lattice_coords(const Vec& v) const {
    std::vector<double> c;
    if (lattice.empty()) return c;
    return least_squares(lattice, v);
  }

  Vec lattice_combination(const std::vector<double>& c) const {
    Vec t = Vec::zero(dim);
    for (size_t i = 0; i < lattice.size(); ++i) t = t + c[i] * lattice[i];
    return t;
  }

  bool in_domain_closed(const Vec& x, double tol = 1e-9) const {
    for (const Wall& w : walls)
      if (w.signed_dist(x) > tol) return false;
    return true;
  }
  bool on_domain_wall(const Vec& x, double tol = 1e-9) const {
    for (const Wall& w : walls)
      if (std::abs(w.signed_dist(x)) <= tol) return true;
    return false;
  }

  // Reflect x across violated walls (most-violated first, lowest index on
  // ties) until it lands in the closed fundamental domain. For periodic
  // groups the point is first reduced modulo the lattice.
  FoldResult fold(Vec x, int max_iter = 512) const {
    FoldResult r;
    r.word = IsometryElement::identity(dim);
    if (kind == GroupKind::Discrete && !lattice.empty()) {
      std::vector<double> c = lattice_coords(x);
      for (double& ci : c) ci = std::nearbyint(ci);
      Vec t = lattice_combination(c);
      x = x - t;
      r.word = compose(r.word, IsometryElement::translation(t));
    }
    for (int it = 0; it < max_iter; ++it) {
      int worst = -1;
      double worst_d = 1e-12;
      for (size_t i = 0; i < walls.size(); ++i) {
        double d = walls[i].signed_dist(x);
        if (d > worst_d) {
          worst_d = d;
          worst = static_cast<int>(i);
        }
      }
      if (worst < 0) {
        r.point = x;
        r.reflections = it;
        return r;
      }
      const Wall& w = walls[static_cast<size_t>(worst)];
      x = x - (2.0 * worst_d) * w.normal;
      r.word = compose(r.word, w.reflection());
    }
    throw FoldDivergence("fold did not reach the fundamental domain in " +
                         std::to_string(max_iter) + " reflections");
  }

  // All mirrors of the group whose planes pass within `radius` of the
  // origin. Exact for Finite; for Discrete, enumerates lattice translates.
  std::vector<Wall> mirrors_within(double radius) const {
    std::vector<Wall> out;
    if (kind == GroupKind::Finite) {
      for (const IsometryElement& e : elements) {
        Vec n(dim);
        double c = 0;
        if (mirror_normal(e, &n, &c)) out.push_back(Wall{n, c});
      }
      return out;
    }
    // Point-group mirror with normal n combines with lattice translations
    // parallel to n into the family of planes <x,n> = (t.n)/2.
    double min_basis = 1e30;
    for (const Vec& t : lattice) min_basis = std::min(min_basis, norm(t));
    int K = static_cast<int>(std::ceil(2.0 * radius / std::max(min_basis, 1e-9))) + 2;
    int r = static_cast<int>(lattice.size());
    for (const IsometryElement& e : elements) {
      Vec n(dim);
      if (!mirror_normal(e, &n, nullptr)) continue;
      std::vector<int> c(static_cast<size_t>(r), -K);
      while (true) {
        Vec t = Vec::zero(dim);
        for (int i = 0; i < r; ++i) t = t + static_cast<double>(c[static_cast<size_t>(i)]) * lattice[static_cast<size_t>(i)];
        Vec tang = t - dot(t, n) * n;
        double off = dot(t, n) / 2.0;
        if (norm(tang) < 1e-9 && std::abs(off) <= radius) {
          bool dup = false;
          for (const Wall& w : out)
            if (approx_eq(w.normal, n) && std::abs(w.offset - off) < 1e-9) dup = true;
          if (!dup) out.push_back(Wall{n, off});
        }
        int i = 0;
        for (; i < r; ++i) {
          if (++c[static_cast<size_t>(i)] <= K) break;
          c[static_cast<size_t>(i)] = -K;
        }
        if (i == r) break;
      }
    }
    return out;
  }
};

// Breadth-first closure over the generator set; words are recorded relative
// to the given generators. Throws ClosureOverflow past max_order.
inline void closure_with_words(const std::vector<IsometryElement>& gens,
                               int max_order,
                               std::vector<IsometryElement>* elements,
                               std::vector<std::vector<int>>* words) {
  int d = gens.empty() ? 0 : gens[0].dim;
  elements->clear();
  words->clear();
  elements->push_back(IsometryElement::identity(d));
  words->push_back({});
  for (size_t head = 0; head < elements->size(); ++head) {
    for (size_t j = 0; j < gens.size(); ++j) {
      IsometryElement p = compose((*elements)[head], gens[j]);
      bool known = false;
      for (const IsometryElement& e : *elements)
        if (approx_eq(e, p)) {
          known = true;
          break;
        }
      if (known) continue;
      if (static_cast<int>(elements->size()) >= max_order)
        throw ClosureOverflow("group closure exceeded " + std::to_string(max_order) +
                              " elements");
      std::vector<int> w = (*words)[head];
      w.push_back(static_cast<int>(j));
      elements->push_back(p);
      words->push_back(std::move(w));
    }
  }
}

inline std::vector<int> dedup_generator_linears(
    const std::vector<IsometryElement>& gens,
    std::vector<IsometryElement>* point_gens) {
  std::vector<int> index;
  point_gens->clear();
  for (const IsometryElement& g : gens) {
    IsometryElement lin(g.linear, Vec::zero(g.dim));
    int found = -1;
    for (size_t k = 0; k < point_gens->size(); ++k)
      if (approx_eq((*point_gens)[k], lin)) found = static_cast<int>(k);
    if (found < 0) {
      found = static_cast<int>(point_gens->size());
      point_gens->push_back(lin);
    }
    index.push_back(found);
  }
  return index;
}

// Finite group from mirror generators. Walls may be supplied (catalog) or
// left empty, in which case the chamber containing seed_dir is walled off by
// the mirrors active at it.
inline ReflectionGroup generate_closure(const std::vector<IsometryElement>& gens,
                                        int max_order = 1024,
                                        std::vector<Wall> walls = {},
                                        Vec seed_dir = {}) {
  ReflectionGroup G;
  G.kind = GroupKind::Finite;
  G.dim = gens.empty() ? 0 : gens[0].dim;
  G.generators = gens;
  std::vector<IsometryElement> pg;
  G.point_gen_index = dedup_generator_linears(gens, &pg);
  closure_with_words(pg, max_order, &G.elements, &G.words);
  if (!walls.empty()) {
    G.walls = std::move(walls);
    return G;
  }
  // Default chamber: the one containing a generic direction with strictly
  // decreasing positive coordinates.
  if (seed_dir.d == 0) {
    seed_dir = Vec(G.dim);
    for (int i = 0; i < G.dim; ++i)
      seed_dir[i] = static_cast<double>(G.dim - i) + 0.137 * (i + 1);
  }
  // Collect all mirror planes, keep those whose plane touches the chamber of
  // the seed: a plane bounds the chamber iff reflecting the seed across it
  // crosses no other mirror first. Cheap test: wall set = minimal set of
  // mirrors m with the property that the segment from seed to its mirror
  // image crosses only m.
  std::vector<Wall> mirrors;
  for (const IsometryElement& e : G.elements) {
    Vec n(G.dim);
    if (mirror_normal(e, &n, nullptr)) {
      if (dot(n, seed_dir) > 0) n = -n;  // orient outward: seed on negative side
      bool dup = false;
      for (const Wall& w : mirrors)
        if (approx_eq(w.normal, n)) dup = true;
      if (!dup) mirrors.push_back(Wall{n, 0.0});
    }
  }
  for (size_t i = 0; i < mirrors.size(); ++i) {
    // Midpoint of seed and its reflection lies on plane i; it bounds the
    // chamber iff that midpoint is on the <=0 side of every other mirror.
    Vec mid = seed_dir - dot(seed_dir, mirrors[i].normal) * mirrors[i].normal;
    bool face = true;
    for (size_t j = 0; j < mirrors.size(); ++j) {
      if (j == i) continue;
      if (mirrors[j].signed_dist(mid) > -1e-12) face = false;
    }
    if (face) G.walls.push_back(mirrors[i]);
  }
  return G;
}

// Lattice-periodic group: affine mirror generators, translation lattice,
// compact (or slab) fundamental domain walls.
inline ReflectionGroup make_discrete_group(const std::vector<IsometryElement>& gens,
                                           std::vector<Vec> lattice,
                                           std::vector<Wall> walls,
                                           int max_point_order = 256) {
  ReflectionGroup G;
  G.kind = GroupKind::Discrete;
  G.dim = gens.empty() ? 0 : gens[0].dim;
  G.generators = gens;
  G.walls = std::move(walls);
  G.lattice = std::move(lattice);
  std::vector<IsometryElement> pg;
  G.point_gen_index = dedup_generator_linears(gens, &pg);
  closure_with_words(pg, max_point_order, &G.elements, &G.words);
  // sanity: the lattice must be stable under the point group
  for (const IsometryElement& e : G.elements)
    for (const Vec& t : G.lattice) {
      Vec img = mul(e.linear, t);
      std::vector<double> c = G.lattice_coords(img);
      Vec rec = G.lattice_combination(c);
      double intres = 0;
      for (double ci : c) intres = std::max(intres, std::abs(ci - std::nearbyint(ci)));
      if (intres > 1e-9 || norm(rec - img) > 1e-9)
        throw BadParams("translation lattice is not stable under the point group");
    }
  return G;
}

inline std::vector<IsometryElement> stabilizer(
    const std::vector<IsometryElement>& elements, const Vec& a,
    double tol = kElemTol) {
  std::vector<IsometryElement> out;
  for (const IsometryElement& g : elements)
    if (norm(g.apply(a) - a) < tol * std::max(1.0, norm(a))) out.push_back(g);
  return out;
}

// Unit normals (both signs) of every mirror in a closed element set.
inline std::vector<Vec> root_system(const std::vector<IsometryElement>& subgroup) {
  std::vector<Vec> roots;
  for (const IsometryElement& e : subgroup) {
    Vec n(e.dim);
    if (!mirror_normal(e, &n, nullptr)) continue;
    bool dup = false;
    for (const Vec& r : roots)
      if (approx_eq(r, n)) dup = true;
    if (!dup) {
      roots.push_back(n);
      roots.push_back(-n);
    }
  }
  return roots;
}

}  // namespace equiflow
