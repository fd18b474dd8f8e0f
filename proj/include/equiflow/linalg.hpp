#pragma once

// Small dense vectors/matrices for ambient dimensions 1..3, plus the few
// decompositions the rest of the library needs (symmetric eigensolver,
// null spaces, tiny least squares). Everything is value-type and allocation
// free so group elements can be copied around casually.

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "errors.hpp"

namespace equiflow {

inline constexpr double kElemTol = 1e-9;  // entrywise tolerance for element identity

struct Vec {
  std::array<double, 3> a{0.0, 0.0, 0.0};
  int d = 0;

  Vec() = default;
  explicit Vec(int dim) : d(dim) { assert(dim >= 0 && dim <= 3); }
  Vec(std::initializer_list<double> xs) {
    d = static_cast<int>(xs.size());
    assert(d <= 3);
    int i = 0;
    for (double x : xs) a[i++] = x;
  }
  static Vec zero(int dim) { return Vec(dim); }

  double& operator[](int i) { return a[static_cast<size_t>(i)]; }
  double operator[](int i) const { return a[static_cast<size_t>(i)]; }
};

inline Vec operator+(const Vec& x, const Vec& y) {
  Vec r(x.d);
  for (int i = 0; i < x.d; ++i) r[i] = x[i] + y[i];
  return r;
}
inline Vec operator-(const Vec& x, const Vec& y) {
  Vec r(x.d);
  for (int i = 0; i < x.d; ++i) r[i] = x[i] - y[i];
  return r;
}
inline Vec operator*(double s, const Vec& x) {
  Vec r(x.d);
  for (int i = 0; i < x.d; ++i) r[i] = s * x[i];
  return r;
}
inline Vec operator-(const Vec& x) { return -1.0 * x; }

inline double dot(const Vec& x, const Vec& y) {
  double s = 0;
  for (int i = 0; i < x.d; ++i) s += x[i] * y[i];
  return s;
}
inline double norm2(const Vec& x) { return dot(x, x); }
inline double norm(const Vec& x) { return std::sqrt(norm2(x)); }
inline bool approx_eq(const Vec& x, const Vec& y, double tol = kElemTol) {
  if (x.d != y.d) return false;
  for (int i = 0; i < x.d; ++i)
    if (std::abs(x[i] - y[i]) > tol) return false;
  return true;
}
inline Vec normalized(const Vec& x) {
  double n = norm(x);
  assert(n > 0);
  return (1.0 / n) * x;
}
inline Vec cross(const Vec& x, const Vec& y) {
  assert(x.d == 3 && y.d == 3);
  return Vec{x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
             x[0] * y[1] - x[1] * y[0]};
}

struct Mat {
  std::array<double, 9> a{};  // row major
  int d = 0;

  Mat() = default;
  explicit Mat(int dim) : d(dim) { assert(dim >= 0 && dim <= 3); a.fill(0.0); }

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat zero(int dim) { return Mat(dim); }

  double& operator()(int i, int j) { return a[static_cast<size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(3 * i + j)]; }
};

inline Vec mul(const Mat& m, const Vec& x) {
  Vec r(m.d);
  for (int i = 0; i < m.d; ++i) {
    double s = 0;
    for (int j = 0; j < m.d; ++j) s += m(i, j) * x[j];
    r[i] = s;
  }
  return r;
}
inline Mat mul(const Mat& m, const Mat& n) {
  Mat r(m.d);
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) {
      double s = 0;
      for (int k = 0; k < m.d; ++k) s += m(i, k) * n(k, j);
      r(i, j) = s;
    }
  return r;
}
inline Mat transpose(const Mat& m) {
  Mat r(m.d);
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) r(i, j) = m(j, i);
  return r;
}
inline Mat operator+(const Mat& m, const Mat& n) {
  Mat r(m.d);
  for (int i = 0; i < 9; ++i) r.a[i] = m.a[i] + n.a[i];
  return r;
}
inline Mat operator-(const Mat& m, const Mat& n) {
  Mat r(m.d);
  for (int i = 0; i < 9; ++i) r.a[i] = m.a[i] - n.a[i];
  return r;
}
inline Mat operator*(double s, const Mat& m) {
  Mat r(m.d);
  for (int i = 0; i < 9; ++i) r.a[i] = s * m.a[i];
  return r;
}
inline Mat outer(const Vec& x, const Vec& y) {
  Mat r(x.d);
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) r(i, j) = x[i] * y[j];
  return r;
}
inline bool approx_eq(const Mat& m, const Mat& n, double tol = kElemTol) {
  if (m.d != n.d) return false;
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j)
      if (std::abs(m(i, j) - n(i, j)) > tol) return false;
  return true;
}
inline double max_abs_diff(const Mat& m, const Mat& n) {
  double r = 0;
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) r = std::max(r, std::abs(m(i, j) - n(i, j)));
  return r;
}

inline double det(const Mat& m) {
  switch (m.d) {
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default: return 0;
  }
}

inline bool is_orthogonal(const Mat& m, double tol = kElemTol) {
  return approx_eq(mul(transpose(m), m), Mat::identity(m.d), tol);
}

// Gaussian elimination with partial pivoting; throws on singular input.
inline Vec solve(Mat A, Vec b) {
  int n = A.d;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A(r, c)) > std::abs(A(p, c))) p = r;
    if (std::abs(A(p, c)) < 1e-14) throw Error("solve: singular matrix");
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(A(p, j), A(c, j));
      std::swap(b[p], b[c]);
    }
    for (int r = c + 1; r < n; ++r) {
      double f = A(r, c) / A(c, c);
      for (int j = c; j < n; ++j) A(r, j) -= f * A(c, j);
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= A(r, j) * x[j];
    x[r] = s / A(r, r);
  }
  return x;
}

inline Mat inverse(const Mat& m) {
  int n = m.d;
  Mat inv(n);
  for (int c = 0; c < n; ++c) {
    Vec e(n);
    e[c] = 1.0;
    Vec col = solve(m, e);
    for (int r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

struct SymEigen {
  Vec values;  // ascending
  Mat vectors; // columns, orthonormal
};

// Cyclic Jacobi rotations; fine for d <= 3.
inline SymEigen eigen_sym(Mat A) {
  int n = A.d;
  Mat V = Mat::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  // sort ascending by eigenvalue
  std::array<int, 3> ord{0, 1, 2};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (A(ord[j], ord[j]) < A(ord[i], ord[i])) std::swap(ord[i], ord[j]);
  SymEigen out;
  out.values = Vec(n);
  out.vectors = Mat(n);
  for (int c = 0; c < n; ++c) {
    out.values[c] = A(ord[c], ord[c]);
    for (int r = 0; r < n; ++r) out.vectors(r, c) = V(r, ord[c]);
  }
  return out;
}

// Orthonormal basis of ker(B), found from the small eigenvalues of B^T B.
// The cutoff mixes the requested absolute tolerance with a relative guard so
// that eigenvalues at roundoff scale (~1e-16 * |B|^2) always count as zero.
inline std::vector<Vec> null_space(const Mat& B, double tol = 1e-9) {
  SymEigen e = eigen_sym(mul(transpose(B), B));
  double lmax = 0;
  for (int c = 0; c < B.d; ++c) lmax = std::max(lmax, std::abs(e.values[c]));
  double thresh = std::max(tol * tol, 1e-12 * lmax);
  std::vector<Vec> basis;
  for (int c = 0; c < B.d; ++c) {
    if (std::abs(e.values[c]) < thresh) {
      Vec v(B.d);
      for (int r = 0; r < B.d; ++r) v[r] = e.vectors(r, c);
      basis.push_back(v);
    }
  }
  return basis;
}

// Least squares min |rhs - sum c_i cols_i| via normal equations (p <= 3
// columns). Returns coefficients; *residual gets the miss distance.
inline std::vector<double> least_squares(const std::vector<Vec>& cols, const Vec& rhs,
                                         double* residual = nullptr) {
  int p = static_cast<int>(cols.size());
  assert(p >= 1 && p <= 3);
  Mat G(p);
  Vec b(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) G(i, j) = dot(cols[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
    b[i] = dot(cols[static_cast<size_t>(i)], rhs);
  }
  Vec c = solve(G, b);
  if (residual) {
    Vec fit = Vec::zero(rhs.d);
    for (int i = 0; i < p; ++i) fit = fit + c[i] * cols[static_cast<size_t>(i)];
    *residual = norm(rhs - fit);
  }
  std::vector<double> out(static_cast<size_t>(p));
  for (int i = 0; i < p; ++i) out[static_cast<size_t>(i)] = c[i];
  return out;
}

// Orthogonal projection of x onto span(basis); basis need not be orthonormal.
inline Vec project_span(const std::vector<Vec>& basis, const Vec& x) {
  if (basis.empty()) return Vec::zero(x.d);
  std::vector<double> c = least_squares(basis, x);
  Vec p = Vec::zero(x.d);
  for (size_t i = 0; i < basis.size(); ++i) p = p + c[i] * basis[i];
  return p;
}

inline bool spans_equal(const std::vector<Vec>& A, const std::vector<Vec>& B,
                        int ambient, double tol = 1e-7) {
  auto dim_of = [&](const std::vector<Vec>& S) {
    Mat M(ambient);
    for (size_t k = 0; k < S.size() && k < 3; ++k)
      for (int r = 0; r < ambient; ++r) M(r, static_cast<int>(k)) = S[k][r];
    int rank = 0;
    SymEigen e = eigen_sym(mul(transpose(M), M));
    for (int i = 0; i < ambient; ++i)
      if (e.values[i] > tol * tol) ++rank;
    return rank;
  };
  if (dim_of(A) != dim_of(B)) return false;
  for (const Vec& v : A)
    if (norm(v - project_span(B, v)) > tol * std::max(1.0, norm(v))) return false;
  for (const Vec& v : B)
    if (norm(v - project_span(A, v)) > tol * std::max(1.0, norm(v))) return false;
  return true;
}

// Canonical rounding used when hashing elements (12 decimals).
inline long long round_key(double x) {
  double r = std::nearbyint(x * 1e12);
  if (r == 0.0) r = 0.0;  // normalize -0
  return static_cast<long long>(r);
}

}  // namespace equiflow
