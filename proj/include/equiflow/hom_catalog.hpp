#pragma once

// The built-in homomorphism table. Every entry is constructed through
// build_homomorphism, so the generator-image data is re-verified on each
// instantiation. Sources/targets come from the group catalog.

#include <string>
#include <vector>

#include "errors.hpp"
#include "group_catalog.hpp"
#include "homomorphism.hpp"

namespace equiflow {

struct HomParams {
  int n = 0, k = 0, m = 1;        // f_m / g_2k / h_2k parameters
  std::string group;              // source override where the entry allows one
  CatalogParams group_params;
};

namespace detail {

// reflection across the line of angle theta through the origin
inline IsometryElement refl_line(double theta) {
  Mat A(2);
  A(0, 0) = std::cos(2 * theta);
  A(0, 1) = std::sin(2 * theta);
  A(1, 0) = std::sin(2 * theta);
  A(1, 1) = -std::cos(2 * theta);
  return IsometryElement(A, Vec::zero(2));
}

inline IsometryElement diag2(double a, double b) {
  Mat A(2);
  A(0, 0) = a;
  A(1, 1) = b;
  return IsometryElement(A, Vec::zero(2));
}

inline IsometryElement sigma1() {  // x -> -x on the line
  Mat A(1);
  A(0, 0) = -1.0;
  return IsometryElement(A, Vec::zero(1));
}

// 3x3 signed permutation: row i has entry sign[i] in column perm[i]
inline IsometryElement sperm3(int p0, int p1, int p2, double s0, double s1,
                              double s2) {
  Mat A(3);
  A(0, p0) = s0;
  A(1, p1) = s1;
  A(2, p2) = s2;
  return IsometryElement(A, Vec::zero(3));
}

inline std::vector<IsometryElement> trivial_lattice_images(
    const ReflectionGroup& G, int target_dim) {
  return std::vector<IsometryElement>(G.lattice.size(),
                                      IsometryElement::identity(target_dim));
}

inline Homomorphism make_identity_hom(const std::string& group,
                                      const CatalogParams& gp) {
  ReflectionGroup G = catalog_group(group.empty() ? "Dn" : group, gp);
  std::vector<IsometryElement> lat;
  for (const Vec& t : G.lattice) lat.push_back(IsometryElement::translation(t));
  ReflectionGroup target = G;
  return build_homomorphism(G, target, G.generators, lat, "identity");
}

inline Homomorphism make_f_m(int n, int k, int m) {
  if (m != 1 && m != -1) throw BadParams("f_m needs m = 1 or m = -1");
  if (n < 1 || k < 1 || n * k > 64) throw BadParams("f_m needs n,k >= 1 with nk <= 64");
  ReflectionGroup src = make_dihedral(n * k);
  ReflectionGroup tgt = make_dihedral(n);
  // s stays s; the rotated mirror r_{nk} s goes to r_n^m s. The n*k = 1
  // source is the order-2 line group with a single generator.
  std::vector<IsometryElement> images;
  if (n == 1) {
    images = {sigma1(), sigma1()};
  } else {
    images = {refl_line(0.0), refl_line(m * M_PI / n)};
  }
  images.resize(src.generators.size(), sigma1());
  std::string nm = "f_m(" + std::to_string(n) + "," + std::to_string(k) + "," +
                   std::to_string(m) + ")";
  return build_homomorphism(src, tgt, images, {}, nm);
}

inline Homomorphism make_fprime() {
  ReflectionGroup src = make_gprime();
  ReflectionGroup tgt = make_dihedral(3);
  std::vector<IsometryElement> images{
      refl_line(0.0),                // wall x2 = 0
      refl_line(2.0 * M_PI / 3.0),   // 30-degree wall -> 120-degree mirror
      refl_line(2.0 * M_PI / 3.0),   // far wall -> same 120-degree mirror
  };
  return build_homomorphism(src, tgt, images, trivial_lattice_images(src, 2),
                            "fprime");
}

inline Homomorphism make_phi() {
  ReflectionGroup src = make_tetra();
  ReflectionGroup tgt = make_dihedral(3);
  // walls {x2=x1}, {x2=-x1} -> reflection in the u1-axis; {x1=x3} -> the
  // 60-degree mirror
  std::vector<IsometryElement> images{refl_line(0.0), refl_line(0.0),
                                      refl_line(M_PI / 3.0)};
  return build_homomorphism(src, tgt, images, {}, "phi");
}

inline Homomorphism make_psi() {
  ReflectionGroup src = make_cube();
  ReflectionGroup tgt = make_tetra();
  std::vector<IsometryElement> images{
      sperm3(0, 1, 2, -1, 1, -1),  // {x2=0} mirror -> half-turn about u2
      sperm3(1, 0, 2, 1, 1, 1),    // swap12 -> swap12
      sperm3(2, 1, 0, 1, 1, 1),    // swap13 -> swap13
  };
  return build_homomorphism(src, tgt, images, {}, "psi");
}

inline Homomorphism make_psiprime() {
  ReflectionGroup src = make_kprime();
  ReflectionGroup tgt = make_tetra();
  std::vector<IsometryElement> images{
      sperm3(0, 1, 2, -1, 1, -1),   // {x2=0} wall
      sperm3(1, 0, 2, 1, 1, 1),     // {x2=x1} wall
      sperm3(2, 1, 0, 1, 1, 1),     // {x1=x3} wall
      sperm3(2, 1, 0, -1, 1, -1),   // affine wall -> reflection in {u1=-u3}
  };
  return build_homomorphism(src, tgt, images, trivial_lattice_images(src, 3),
                            "psiprime");
}

inline Homomorphism make_g_2k(int k) {
  if (k < 1 || k > 32) throw BadParams("g_2k needs 1 <= k <= 32");
  ReflectionGroup src = make_dihedral(2 * k);
  ReflectionGroup tgt = make_dihedral(2);
  // s -> -I (fixes only the origin), r s -> the mirror fixing the u2-axis
  std::vector<IsometryElement> images{diag2(-1, -1), diag2(-1, 1)};
  return build_homomorphism(src, tgt, images, {}, "g_2k(" + std::to_string(k) + ")");
}

inline Homomorphism make_h_2k(int k) {
  if (k < 1 || k > 32) throw BadParams("h_2k needs 1 <= k <= 32");
  ReflectionGroup src = make_dihedral(2 * k);
  ReflectionGroup tgt = make_dihedral(1);
  // s -> identity, r s -> the point reflection of the line
  std::vector<IsometryElement> images{IsometryElement::identity(1), sigma1()};
  return build_homomorphism(src, tgt, images, {}, "h_2k(" + std::to_string(k) + ")");
}

inline Homomorphism make_epsilon(const std::string& group,
                                 const CatalogParams& gp) {
  ReflectionGroup G = catalog_group(group.empty() ? "H" : group, gp);
  ReflectionGroup tgt = make_dihedral(1);
  std::vector<IsometryElement> images;
  for (const IsometryElement& g : G.generators)
    images.push_back(det(g.linear) < 0 ? sigma1() : IsometryElement::identity(1));
  return build_homomorphism(G, tgt, images, trivial_lattice_images(G, 1),
                            "epsilon");
}

inline Homomorphism make_fdoubleprime() {
  ReflectionGroup src = make_gprime();
  ReflectionGroup tgt = make_dihedral(2);
  std::vector<IsometryElement> images{diag2(-1, -1), diag2(-1, 1), diag2(-1, -1)};
  return build_homomorphism(src, tgt, images, trivial_lattice_images(src, 2),
                            "fdoubleprime");
}

inline Homomorphism make_p_canonical(const std::string& group,
                                     const CatalogParams& gp) {
  ReflectionGroup G = catalog_group(group.empty() ? "Gprime" : group, gp);
  if (G.kind != GroupKind::Discrete)
    throw BadParams("p_canonical needs a lattice group as its source");
  ReflectionGroup tgt = generate_closure(G.point_generators(), 1024);
  tgt.name = G.name + "_0";
  std::vector<IsometryElement> images;
  for (const IsometryElement& g : G.generators)
    images.push_back(IsometryElement(g.linear, Vec::zero(G.dim)));
  return build_homomorphism(G, tgt, images, trivial_lattice_images(G, G.dim),
                            "p_canonical");
}

inline Homomorphism make_footnote_negative() {
  ReflectionGroup src = make_interval_lattice(1.0);
  ReflectionGroup tgt = make_dihedral(1);
  // mirror at 0 -> identity, mirror at 1 -> sigma; the unit translation of
  // the lattice therefore maps to sigma, which breaks the requirement that
  // translations act trivially.
  std::vector<IsometryElement> images{IsometryElement::identity(1), sigma1()};
  std::vector<IsometryElement> lat{sigma1()};
  return build_homomorphism(src, tgt, images, lat, "footnote_negative");
}

}  // namespace detail

inline std::vector<std::string> catalog_homomorphism_names() {
  return {"identity", "f_D6_D3", "fprime",  "phi",         "psi",
          "psiprime", "f_m",     "g_2k",    "epsilon",     "h_2k",
          "fdoubleprime", "p_canonical", "footnote_negative"};
}

inline Homomorphism catalog_homomorphism(const std::string& name,
                                         const HomParams& p = {}) {
  if (name == "identity") return detail::make_identity_hom(p.group, p.group_params);
  if (name == "f_D6_D3") {
    Homomorphism f = detail::make_f_m(3, 2, 1);
    f.name = "f_D6_D3";
    return f;
  }
  if (name == "fprime") return detail::make_fprime();
  if (name == "phi") return detail::make_phi();
  if (name == "psi") return detail::make_psi();
  if (name == "psiprime") return detail::make_psiprime();
  if (name == "f_m")
    return detail::make_f_m(p.n == 0 ? 3 : p.n, p.k == 0 ? 2 : p.k, p.m);
  if (name == "g_2k") return detail::make_g_2k(p.k == 0 ? 2 : p.k);
  if (name == "epsilon") return detail::make_epsilon(p.group, p.group_params);
  if (name == "h_2k") return detail::make_h_2k(p.k == 0 ? 2 : p.k);
  if (name == "fdoubleprime") return detail::make_fdoubleprime();
  if (name == "p_canonical") return detail::make_p_canonical(p.group, p.group_params);
  if (name == "footnote_negative") return detail::make_footnote_negative();
  throw UnknownCatalogName("unknown homomorphism '" + name + "'");
}

}  // namespace equiflow
