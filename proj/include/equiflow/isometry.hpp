#pragma once

// Euclidean isometries x -> Ax + b with orthogonal A. Finite reflection
// groups use b = 0 throughout; lattice-periodic groups also carry genuine
// translations and affine mirror planes.

#include <string>

#include "linalg.hpp"

namespace equiflow {

struct IsometryElement {
  Mat linear;
  Vec shift;
  int dim = 0;

  IsometryElement() = default;
  IsometryElement(const Mat& A, const Vec& b) : linear(A), shift(b), dim(A.d) {}

  static IsometryElement identity(int d) {
    return IsometryElement(Mat::identity(d), Vec::zero(d));
  }
  static IsometryElement translation(const Vec& t) {
    return IsometryElement(Mat::identity(t.d), t);
  }
  // Reflection across the hyperplane {<x,n> = c}; n need not be unit.
  static IsometryElement reflection(const Vec& n_in, double c = 0.0) {
    Vec n = normalized(n_in);
    Mat A = Mat::identity(n.d) - 2.0 * outer(n, n);
    return IsometryElement(A, (2.0 * c) * n);
  }

  Vec apply(const Vec& x) const { return mul(linear, x) + shift; }
};

// (A,b) o (C,d) : x -> A(Cx + d) + b
inline IsometryElement compose(const IsometryElement& g, const IsometryElement& h) {
  return IsometryElement(mul(g.linear, h.linear), mul(g.linear, h.shift) + g.shift);
}

inline IsometryElement inverse(const IsometryElement& g) {
  Mat At = transpose(g.linear);
  return IsometryElement(At, -1.0 * mul(At, g.shift));
}

inline bool approx_eq(const IsometryElement& g, const IsometryElement& h,
                      double tol = kElemTol) {
  return g.dim == h.dim && approx_eq(g.linear, h.linear, tol) &&
         approx_eq(g.shift, h.shift, tol);
}

inline bool is_identity(const IsometryElement& g, double tol = kElemTol) {
  return approx_eq(g, IsometryElement::identity(g.dim), tol);
}

inline bool is_pure_translation(const IsometryElement& g, double tol = kElemTol) {
  return approx_eq(g.linear, Mat::identity(g.dim), tol);
}

// Hash key with entries rounded to 12 decimals, so elements equal within the
// comparison tolerance collide onto the same bucket in practice.
inline std::string element_key(const IsometryElement& g) {
  std::string k;
  k.reserve(16 * 12);
  auto put = [&k](double x) {
    long long v = round_key(x);
    k.append(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j) put(g.linear(i, j));
  for (int i = 0; i < g.dim; ++i) put(g.shift[i]);
  return k;
}

// A mirror element: orthogonal involution whose linear part fixes a
// hyperplane, with any translation component perpendicular to that plane
// (otherwise the element is a glide and fixes nothing).
inline bool mirror_normal(const IsometryElement& g, Vec* normal_out,
                          double* offset_out, double tol = 1e-9) {
  int d = g.dim;
  const Mat& A = g.linear;
  if (!approx_eq(A, transpose(A), tol)) return false;
  if (!approx_eq(mul(A, A), Mat::identity(d), tol)) return false;
  double tr = 0;
  for (int i = 0; i < d; ++i) tr += A(i, i);
  if (std::abs(tr - (d - 2)) > 1e-6) return false;  // exactly one -1 eigenvalue
  // the -1 eigenvector spans ker(A + I)
  std::vector<Vec> ker = null_space(A + Mat::identity(d), tol);
  if (ker.size() != 1) return false;
  Vec n = normalized(ker[0]);
  // deterministic orientation: first nonzero component positive
  for (int i = 0; i < d; ++i) {
    if (std::abs(n[i]) > 1e-12) {
      if (n[i] < 0) n = -n;
      break;
    }
  }
  Vec tangential = g.shift - dot(g.shift, n) * n;
  if (norm(tangential) > tol) return false;  // glide
  if (normal_out) *normal_out = n;
  if (offset_out) *offset_out = dot(g.shift, n) / 2.0;
  return true;
}

inline bool is_mirror(const IsometryElement& g, double tol = 1e-9) {
  return mirror_normal(g, nullptr, nullptr, tol);
}

}  // namespace equiflow
