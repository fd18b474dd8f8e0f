#pragma once

// Built-in reflection groups addressable by name. Finite: dihedral D_n
// (D_1 acts on the line, n >= 2 on the plane), the tetrahedral group, the
// full cube group. Discrete (lattice-periodic): the hexagonal triangle
// group Gprime, its cubic counterpart Kprime, the square-lattice group H,
// and the 1D interval lattice.

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace equiflow {

struct CatalogParams {
  int n = 0;       // Dn
  double d = 1.0;  // interval_lattice spacing
};

namespace detail {

inline ReflectionGroup make_dihedral(int n) {
  if (n < 1 || n > 64) throw BadParams("Dn needs 1 <= n <= 64, got " + std::to_string(n));
  if (n == 1) {
    // order-2 group on the line
    Vec nrm(1);
    nrm[0] = -1.0;
    std::vector<Wall> walls{Wall{nrm, 0.0}};  // F = (0, inf)
    std::vector<IsometryElement> gens{IsometryElement::reflection(nrm, 0.0)};
    ReflectionGroup G = generate_closure(gens, 8, walls);
    G.name = "D1";
    return G;
  }
  // mirrors along the lines of angle k*pi/n; F = sector (0, pi/n)
  double an = M_PI / n;
  Vec n1{0.0, -1.0};
  Vec n2{-std::sin(an), std::cos(an)};
  std::vector<Wall> walls{Wall{n1, 0.0}, Wall{n2, 0.0}};
  std::vector<IsometryElement> gens{IsometryElement::reflection(n1, 0.0),
                                    IsometryElement::reflection(n2, 0.0)};
  ReflectionGroup G = generate_closure(gens, 4 * n + 8, walls);
  G.name = "D" + std::to_string(n);
  return G;
}

// wall with an unnormalized normal; offset is for the unit normal
inline Wall wall3(double a, double b, double c, double off = 0.0) {
  return Wall{normalized(Vec{a, b, c}), off};
}

inline ReflectionGroup make_tetra() {
  // chamber {|x2| < x1 < x3}
  std::vector<Wall> walls{wall3(-1, 1, 0), wall3(-1, -1, 0), wall3(1, 0, -1)};
  std::vector<IsometryElement> gens;
  for (const Wall& w : walls) gens.push_back(w.reflection());
  ReflectionGroup G = generate_closure(gens, 64, walls);
  G.name = "tetra";
  return G;
}

inline ReflectionGroup make_cube() {
  // chamber {0 < x2 < x1 < x3}
  std::vector<Wall> walls{Wall{Vec{0, -1, 0}, 0.0}, wall3(-1, 1, 0),
                          wall3(1, 0, -1)};
  std::vector<IsometryElement> gens;
  for (const Wall& w : walls) gens.push_back(w.reflection());
  ReflectionGroup G = generate_closure(gens, 96, walls);
  G.name = "cube";
  return G;
}

inline ReflectionGroup make_gprime() {
  // 30-60-90 triangle (0,0), (1,0), (3/4, sqrt3/4); hexagonal lattice
  double s3 = std::sqrt(3.0);
  std::vector<Wall> walls{
      Wall{Vec{0, -1}, 0.0},           // x2 = 0
      Wall{Vec{-0.5, s3 / 2}, 0.0},    // 30-degree line through the origin
      Wall{Vec{s3 / 2, 0.5}, s3 / 2},  // 120-degree line through (1,0)
  };
  std::vector<IsometryElement> gens;
  for (const Wall& w : walls) gens.push_back(w.reflection());
  std::vector<Vec> lattice{Vec{1.5, s3 / 2}, Vec{1.5, -s3 / 2}};
  ReflectionGroup G = make_discrete_group(gens, lattice, walls);
  G.name = "Gprime";
  return G;
}

inline ReflectionGroup make_kprime() {
  // pyramid with vertices O, (1,1,1), (1,0,1), (0,0,2)
  double r2 = std::sqrt(2.0);
  std::vector<Wall> walls{
      Wall{Vec{0, -1, 0}, 0.0},  // x2 = 0
      wall3(-1, 1, 0),           // x2 = x1
      wall3(1, 0, -1),           // x1 = x3
      wall3(1, 0, 1, r2),        // x1 + x3 = 2
  };
  std::vector<IsometryElement> gens;
  for (const Wall& w : walls) gens.push_back(w.reflection());
  std::vector<Vec> lattice{Vec{2, 0, 2}, Vec{0, 2, 2}, Vec{0, -2, 2}};
  ReflectionGroup G = make_discrete_group(gens, lattice, walls);
  G.name = "Kprime";
  return G;
}

inline ReflectionGroup make_h() {
  // 45-45-90 triangle (0,0), (1,0), (1,1); square lattice
  double r2 = std::sqrt(2.0);
  std::vector<Wall> walls{
      Wall{Vec{0, -1}, 0.0},            // x2 = 0
      Wall{Vec{-1 / r2, 1 / r2}, 0.0},  // x2 = x1
      Wall{Vec{1, 0}, 1.0},             // x1 = 1
  };
  std::vector<IsometryElement> gens;
  for (const Wall& w : walls) gens.push_back(w.reflection());
  std::vector<Vec> lattice{Vec{2, 0}, Vec{0, 2}};
  ReflectionGroup G = make_discrete_group(gens, lattice, walls);
  G.name = "H";
  return G;
}

inline ReflectionGroup make_interval_lattice(double d) {
  if (!(d > 0)) throw BadParams("interval_lattice needs d > 0");
  Vec nl(1), nr(1);
  nl[0] = -1.0;
  nr[0] = 1.0;
  std::vector<Wall> walls{Wall{nl, 0.0}, Wall{nr, d}};
  std::vector<IsometryElement> gens{IsometryElement::reflection(nl, 0.0),
                                    IsometryElement::reflection(nr, d)};
  Vec t(1);
  t[0] = 2.0 * d;
  ReflectionGroup G = make_discrete_group(gens, {t}, walls);
  G.name = "interval_lattice";
  return G;
}

}  // namespace detail

inline ReflectionGroup catalog_group(const std::string& name,
                                     const CatalogParams& params = {}) {
  if (name == "Dn") return detail::make_dihedral(params.n == 0 ? 3 : params.n);
  if (name == "tetra") return detail::make_tetra();
  if (name == "cube") return detail::make_cube();
  if (name == "Gprime") return detail::make_gprime();
  if (name == "Kprime") return detail::make_kprime();
  if (name == "H") return detail::make_h();
  if (name == "interval_lattice") return detail::make_interval_lattice(params.d);
  throw UnknownCatalogName("unknown group '" + name + "'");
}

}  // namespace equiflow
