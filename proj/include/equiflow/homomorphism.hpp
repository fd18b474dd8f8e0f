#pragma once

// Homomorphisms f : G -> Gamma between reflection groups, stored as images
// of the mirror generators (plus lattice generators when G is periodic) and
// extended to the whole group through generator words. Construction verifies
// multiplicativity exhaustively on the point group, commutation of the
// lattice images, and the conjugation rule f(A t A^-1) = f(A) f(t) f(A)^-1,
// so a Homomorphism value is a proof-carrying object.

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace equiflow {

// Wall subset certificate: for each source generator, the subset of chamber
// walls whose intersection equals the fixed subspace of its image. An empty
// subset stands for the whole target space (image acts as the identity).
struct PositivityCertificate {
  int chamber_element = -1;  // target element carrying the base chamber here
  std::vector<Wall> chamber_walls;
  std::vector<std::vector<int>> wall_assignment;  // per source generator
};

struct PositivityResult {
  bool positive = false;
  PositivityCertificate certificate;                  // first positive chamber
  std::vector<PositivityCertificate> all_certificates;
  // (chamber element, generator) pairs that ruled chambers out
  std::vector<std::pair<int, int>> failures;
};

class Homomorphism {
 public:
  ReflectionGroup source;
  ReflectionGroup target;
  std::string name;

  std::vector<IsometryElement> gen_image;      // per source generator
  std::vector<IsometryElement> point_image;    // per source point element
  std::vector<IsometryElement> lattice_image;  // per source lattice vector

  int domain_dim() const { return source.dim; }
  int range_dim() const { return target.dim; }

  IsometryElement identity_image() const {
    return IsometryElement::identity(target.dim);
  }

  // f restricted to the translation subgroup, at integer coordinates c.
  IsometryElement translation_image(const std::vector<double>& c) const {
    IsometryElement out = identity_image();
    for (size_t j = 0; j < lattice_image.size(); ++j) {
      long long p = static_cast<long long>(std::nearbyint(c[j]));
      const IsometryElement& base =
          p >= 0 ? lattice_image[j] : inverse(lattice_image[j]);
      for (long long q = 0; q < std::llabs(p); ++q) out = compose(out, base);
    }
    return out;
  }

  IsometryElement translation_image_of(const Vec& t) const {
    std::vector<double> c = source.lattice_coords(t);
    for (double ci : c)
      if (std::abs(ci - std::nearbyint(ci)) > 1e-9)
        throw Error("translation is not a lattice vector");
    return translation_image(c);
  }

  // Evaluate f at an arbitrary element of G.
  IsometryElement map(const IsometryElement& g) const {
    IsometryElement point(g.linear, Vec::zero(source.dim));
    std::optional<int> i = source.find_element(point);
    if (!i) throw Error("element is not in the source group");
    if (source.kind == GroupKind::Finite) {
      if (norm(g.shift) > kElemTol) throw Error("element is not in the source group");
      return point_image[static_cast<size_t>(*i)];
    }
    return compose(translation_image_of(g.shift),
                   point_image[static_cast<size_t>(*i)]);
  }

  bool lattice_acts_trivially(double tol = kElemTol) const {
    for (const IsometryElement& e : lattice_image)
      if (!is_identity(e, tol)) return false;
    return true;
  }
};

namespace detail {

inline bool group_contains(const ReflectionGroup& G, const IsometryElement& g) {
  IsometryElement point(g.linear, Vec::zero(G.dim));
  if (!G.find_element(point)) return false;
  if (G.kind == GroupKind::Finite) return norm(g.shift) <= kElemTol;
  std::vector<double> c = G.lattice_coords(g.shift);
  Vec rec = G.lattice_combination(c);
  if (norm(rec - g.shift) > 1e-9) return false;
  for (double ci : c)
    if (std::abs(ci - std::nearbyint(ci)) > 1e-9) return false;
  return true;
}

}  // namespace detail

inline Homomorphism build_homomorphism(
    ReflectionGroup source, ReflectionGroup target,
    std::vector<IsometryElement> gen_images,
    std::vector<IsometryElement> lattice_images = {},
    const std::string& name = "") {
  if (gen_images.size() != source.generators.size())
    throw BadParams("need one image per source generator");
  if (lattice_images.size() != source.lattice.size())
    throw BadParams("need one image per lattice generator");

  Homomorphism f;
  f.name = name;
  f.gen_image = std::move(gen_images);
  f.lattice_image = std::move(lattice_images);

  for (size_t i = 0; i < f.gen_image.size(); ++i)
    if (!detail::group_contains(target, f.gen_image[i]))
      throw NotAHomomorphism("image of generator #" + std::to_string(i) +
                             " is not an element of the target group");
  for (size_t j = 0; j < f.lattice_image.size(); ++j)
    if (!detail::group_contains(target, f.lattice_image[j]))
      throw NotAHomomorphism("image of lattice generator #" + std::to_string(j) +
                             " is not an element of the target group");

  f.source = std::move(source);
  f.target = std::move(target);
  const ReflectionGroup& G = f.source;

  // Point-generator images, derived from the affine generator images by
  // stripping the translation part: f0(A) = f_T(b)^-1 f(s) for s = t_b A.
  std::vector<IsometryElement> pg = G.point_generators();
  std::vector<std::optional<IsometryElement>> f0(pg.size());
  for (size_t i = 0; i < G.generators.size(); ++i) {
    const Vec& b = G.generators[i].shift;
    IsometryElement ft = f.identity_image();
    if (norm(b) > kElemTol) {
      if (G.kind != GroupKind::Discrete)
        throw BadParams("finite group generator has a translation part");
      ft = f.translation_image_of(b);
    }
    IsometryElement cand = compose(inverse(ft), f.gen_image[i]);
    int k = G.point_gen_index[i];
    if (!f0[static_cast<size_t>(k)]) {
      f0[static_cast<size_t>(k)] = cand;
    } else if (!approx_eq(*f0[static_cast<size_t>(k)], cand)) {
      throw NotAHomomorphism("generators #" + std::to_string(i) +
                             " share a linear part with an earlier generator "
                             "but induce a different image");
    }
  }

  // Extend along words, then check f(gh) = f(g) f(h) on every pair.
  f.point_image.clear();
  for (size_t e = 0; e < G.elements.size(); ++e) {
    IsometryElement img = f.identity_image();
    for (int j : G.words[e]) img = compose(img, *f0[static_cast<size_t>(j)]);
    f.point_image.push_back(img);
  }
  for (size_t i = 0; i < G.elements.size(); ++i)
    for (size_t j = 0; j < G.elements.size(); ++j) {
      IsometryElement prod = compose(G.elements[i], G.elements[j]);
      std::optional<int> k = G.find_element(prod);
      if (!k) throw Error("point group is not closed under composition");
      IsometryElement lhs = f.point_image[static_cast<size_t>(*k)];
      IsometryElement rhs = compose(f.point_image[i], f.point_image[j]);
      if (!approx_eq(lhs, rhs))
        throw NotAHomomorphism(
            (name.empty() ? std::string("map") : name) +
            " is not multiplicative: witness pair (elements #" +
            std::to_string(i) + ", #" + std::to_string(j) + ")");
    }

  if (G.kind == GroupKind::Discrete) {
    // translation images must commute (the lattice is abelian)
    for (size_t i = 0; i < f.lattice_image.size(); ++i)
      for (size_t j = i + 1; j < f.lattice_image.size(); ++j) {
        IsometryElement ab = compose(f.lattice_image[i], f.lattice_image[j]);
        IsometryElement ba = compose(f.lattice_image[j], f.lattice_image[i]);
        if (!approx_eq(ab, ba))
          throw NotAHomomorphism("lattice images do not commute: witness pair "
                                 "(lattice generators #" + std::to_string(i) +
                                 ", #" + std::to_string(j) + ")");
      }
    // conjugation rule f(A t A^-1) = f(A) f(t) f(A)^-1
    for (size_t k = 0; k < pg.size(); ++k)
      for (size_t j = 0; j < G.lattice.size(); ++j) {
        Vec t = mul(pg[k].linear, G.lattice[j]);
        IsometryElement lhs = f.translation_image_of(t);
        IsometryElement rhs = compose(
            compose(*f0[k], f.lattice_image[j]), inverse(*f0[k]));
        if (!approx_eq(lhs, rhs))
          throw NotAHomomorphism(
              "conjugation mismatch: witness pair (point generator #" +
              std::to_string(k) + ", lattice generator #" + std::to_string(j) +
              ")");
      }
  }
  return f;
}

// Walls of the chamber gamma(Phi_base) of a finite reflection group.
inline std::vector<Wall> chamber_walls(const ReflectionGroup& Gamma, int gamma_idx) {
  std::vector<Wall> out;
  const Mat& A = Gamma.elements[static_cast<size_t>(gamma_idx)].linear;
  for (const Wall& w : Gamma.walls) out.push_back(Wall{mul(A, w.normal), w.offset});
  return out;
}

// Positivity in the wall-subset sense: a chamber Phi of the target such that
// the fixed subspace of every generator image is an intersection of Phi's
// walls (the empty intersection, i.e. the whole space, is allowed).
inline PositivityResult is_positive(const Homomorphism& f) {
  if (f.target.kind != GroupKind::Finite)
    throw BadParams("positivity is defined against a finite target group");
  PositivityResult res;
  int m = f.target.dim;
  int nwalls = static_cast<int>(f.target.walls.size());

  std::vector<Subspace> fixed;
  for (const IsometryElement& img : f.gen_image)
    fixed.push_back(fixed_subspace(img));

  for (size_t gi = 0; gi < f.target.elements.size(); ++gi) {
    std::vector<Wall> cw = chamber_walls(f.target, static_cast<int>(gi));
    PositivityCertificate cert;
    cert.chamber_element = static_cast<int>(gi);
    cert.chamber_walls = cw;
    bool ok = true;
    for (size_t s = 0; s < f.gen_image.size() && ok; ++s) {
      bool matched = false;
      for (int mask = 0; mask < (1 << nwalls); ++mask) {
        Mat B = Mat::zero(m);
        for (int j = 0; j < nwalls; ++j)
          if (mask & (1 << j))
            B = B + outer(cw[static_cast<size_t>(j)].normal,
                          cw[static_cast<size_t>(j)].normal);
        Subspace inter;
        inter.ambient = m;
        inter.basis = null_space(B);
        if (subspace_eq(inter, fixed[s])) {
          std::vector<int> subset;
          for (int j = 0; j < nwalls; ++j)
            if (mask & (1 << j)) subset.push_back(j);
          cert.wall_assignment.push_back(subset);
          matched = true;
          break;
        }
      }
      if (!matched) {
        res.failures.emplace_back(static_cast<int>(gi), static_cast<int>(s));
        ok = false;
      }
    }
    if (ok) res.all_certificates.push_back(cert);
  }
  res.positive = !res.all_certificates.empty();
  if (res.positive) res.certificate = res.all_certificates.front();
  return res;
}

}  // namespace equiflow
