#pragma once

// The geometric regions attached to a positive homomorphism f : G -> Gamma
// and a minimum a: the target-side cone scriptD (interior of the union of
// chambers under the stabilizer Gamma_a), its source-side counterpart D,
// the connectivity core D0 (union over the subgroup generated by the walls
// whose image fixes a), and the lattice cell.
//
// Membership is decided by folding: x lies in the interior of a union of
// closed copies over a subgroup S iff every copy containing x (one per
// stabilizer element of the folded representative) is an S-copy. Points
// within tolerance of a separating mirror acquire that mirror in their
// stabilizer and drop out, which gives open-set wall semantics for free.

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "homomorphism.hpp"

namespace equiflow {

// Exact Euclidean projection onto the closed chamber (an intersection of
// half-spaces through the origin), by trying every face subset.
inline Vec project_onto_chamber(const std::vector<Wall>& walls, const Vec& u) {
  int k = static_cast<int>(walls.size());
  int m = u.d;
  Vec best = Vec::zero(m);
  double best_d2 = 1e300;
  bool found = false;
  for (int mask = 0; mask < (1 << k); ++mask) {
    Vec cand;
    if (mask == 0) {
      cand = u;
    } else {
      Mat B = Mat::zero(m);
      for (int j = 0; j < k; ++j)
        if (mask & (1 << j))
          B = B + outer(walls[static_cast<size_t>(j)].normal,
                        walls[static_cast<size_t>(j)].normal);
      Subspace inter;
      inter.ambient = m;
      inter.basis = null_space(B);
      cand = inter.project(u);
    }
    bool feasible = true;
    for (int j = 0; j < k; ++j)
      if (walls[static_cast<size_t>(j)].signed_dist(cand) > 1e-12 * std::max(1.0, norm(u)))
        feasible = false;
    if (!feasible) continue;
    double d2 = norm2(u - cand);
    if (!found || d2 < best_d2) {
      found = true;
      best_d2 = d2;
      best = cand;
    }
  }
  if (!found) throw Error("chamber projection found no feasible face");
  return best;
}

namespace detail {

// Elements of G fixing x (for periodic groups, assembled per point element
// from the unique translation candidate).
inline std::vector<IsometryElement> point_stabilizer(const ReflectionGroup& G,
                                                     const Vec& x,
                                                     double tol = 1e-9) {
  std::vector<IsometryElement> out;
  double scale = std::max(1.0, norm(x));
  for (const IsometryElement& e : G.elements) {
    Vec t = x - mul(e.linear, x);
    if (G.kind == GroupKind::Finite || G.lattice.empty()) {
      if (norm(t) <= tol * scale) out.push_back(e);
      continue;
    }
    std::vector<double> c = G.lattice_coords(t);
    for (double& ci : c) ci = std::nearbyint(ci);
    Vec tl = G.lattice_combination(c);
    if (norm(tl - t) <= tol * scale)
      out.push_back(IsometryElement(e.linear, tl));
  }
  return out;
}

inline bool in_element_list(const std::vector<IsometryElement>& list,
                            const IsometryElement& g) {
  for (const IsometryElement& e : list)
    if (approx_eq(e, g)) return true;
  return false;
}

}  // namespace detail

class Regions {
 public:
  Homomorphism f;
  Vec a;                  // effective minimum, inside the closed chamber
  std::vector<Wall> chamber;  // walls of Phi
  PositivityCertificate certificate;
  std::vector<IsometryElement> Gamma_a;  // stabilizer of a in the target
  std::vector<IsometryElement> G_a;      // wall subgroup with images in Gamma_a

  // target side: interior of the union of Gamma_a-copies of Phi-bar
  bool in_scriptD(const Vec& u) const {
    FoldResult fr = f.target.fold(u);
    // the fold works over the base chamber; move its word to the Phi copy
    for (const IsometryElement& h : detail::point_stabilizer(f.target, fr.point)) {
      IsometryElement copy = compose(fr.word, h);
      if (!member_of_phi_union(copy)) return false;
    }
    return true;
  }

  // source side: interior of the union of copies gF-bar with f(g) in Gamma_a
  bool in_D(const Vec& x) const {
    FoldResult fr = f.source.fold(x);
    for (const IsometryElement& h : detail::point_stabilizer(f.source, fr.point)) {
      IsometryElement copy = compose(fr.word, h);
      if (!detail::in_element_list(Gamma_a, f.map(copy))) return false;
    }
    return true;
  }

  bool in_D0(const Vec& x) const {
    FoldResult fr = f.source.fold(x);
    for (const IsometryElement& h : detail::point_stabilizer(f.source, fr.point)) {
      IsometryElement copy = compose(fr.word, h);
      if (!detail::in_element_list(G_a, copy)) return false;
    }
    return true;
  }

  // lattice cell: no translation needed to fold
  bool in_cell(const Vec& x) const {
    if (f.source.kind != GroupKind::Discrete || f.source.lattice.empty()) return true;
    std::vector<double> c = f.source.lattice_coords(x);
    for (double ci : c)
      if (std::nearbyint(ci) != 0.0) return false;
    return true;
  }

 private:
  bool member_of_phi_union(const IsometryElement& copy) const {
    // copies of Phi-bar correspond to gamma * (chamber element); the copy
    // g F-bar lies in the union iff g * cert^-1 stabilizes a
    IsometryElement rel = compose(copy, inverse(chamber_element()));
    return detail::in_element_list(Gamma_a, rel);
  }

  IsometryElement chamber_element() const {
    return f.target.elements[static_cast<size_t>(certificate.chamber_element)];
  }
};

// Assembles the regions for a positive homomorphism. The chamber is the
// first positive certificate whose closure contains a; if none does, a is
// replaced by its orbit representative inside the first positive chamber.
inline Regions build_regions(const Homomorphism& f, const Vec& a_in) {
  if (!f.lattice_acts_trivially())
    throw NotDiscrete("translations of the source act nontrivially on the "
                      "target, so no periodic equivariant field exists");
  PositivityResult pos = is_positive(f);
  if (!pos.positive)
    throw NotPositive("homomorphism " + (f.name.empty() ? "<anon>" : f.name) +
                      " admits no chamber certificate");

  Regions R;
  R.f = f;
  Vec a = a_in;

  const PositivityCertificate* chosen = nullptr;
  for (const PositivityCertificate& c : pos.all_certificates) {
    bool inside = true;
    for (const Wall& w : c.chamber_walls)
      if (w.signed_dist(a) > 1e-9 * std::max(1.0, norm(a))) inside = false;
    if (inside) {
      chosen = &c;
      break;
    }
  }
  if (!chosen) {
    chosen = &pos.all_certificates.front();
    FoldResult fr = f.target.fold(a);
    const IsometryElement& gamma =
        f.target.elements[static_cast<size_t>(chosen->chamber_element)];
    a = gamma.apply(fr.point);
  }
  R.a = a;
  R.certificate = *chosen;
  R.chamber = chosen->chamber_walls;
  R.Gamma_a = stabilizer(f.target.elements, a);

  std::vector<IsometryElement> gens;
  for (size_t i = 0; i < f.source.generators.size(); ++i)
    if (detail::in_element_list(R.Gamma_a, f.gen_image[i]))
      gens.push_back(f.source.generators[i]);
  if (gens.empty()) {
    R.G_a = {IsometryElement::identity(f.source.dim)};
  } else {
    std::vector<std::vector<int>> words;
    closure_with_words(gens, 4096, &R.G_a, &words);
  }
  return R;
}

// Distance from x (inside D) to the boundary of D: the nearest mirror of G
// whose reflection takes the copy containing x out of the union.
inline double distance_to_boundary_D(const Regions& R, const Vec& x) {
  if (!R.in_D(x)) throw OutsideD("point is not inside D");
  const ReflectionGroup& G = R.f.source;
  double margin = 0;
  for (const Vec& t : G.lattice) margin = std::max(margin, norm(t));
  std::vector<Wall> mirrors = G.mirrors_within(norm(x) + 3.0 * margin + 1.0);
  double best = 1e300;
  for (const Wall& w : mirrors) {
    double d = std::abs(w.signed_dist(x));
    if (d >= best) continue;
    Vec rx = x - (2.0 * w.signed_dist(x)) * w.normal;
    if (!R.in_D(rx)) best = d;
  }
  return best;
}

}  // namespace equiflow
