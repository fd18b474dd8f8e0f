#pragma once

// Orbit-product potentials: W(u) = scale * prod_b |u - b|^(2p) over the
// orbit {gamma a}, p = 1 (generic minima) or p = 2 (degenerate minima).
// Gradient and Hessian use leave-one-out partial products, so there is no
// 0 * inf trouble at the wells themselves.

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace equiflow {

struct Potential {
  std::vector<Vec> wells;
  double scale = 1.0;
  int power = 1;  // exponent p in |u-b|^(2p)
  int m = 0;      // ambient dimension
  std::string kind;

  double value(const Vec& u) const {
    double w = scale;
    for (const Vec& b : wells) {
      double q = norm2(u - b);
      w *= (power == 1) ? q : q * q;
    }
    return w;
  }

  Vec gradient(const Vec& u) const {
    size_t N = wells.size();
    std::vector<double> q(N), pre(N + 1), suf(N + 1);
    for (size_t i = 0; i < N; ++i) {
      double r2 = norm2(u - wells[i]);
      q[i] = (power == 1) ? r2 : r2 * r2;
    }
    pre[0] = 1.0;
    for (size_t i = 0; i < N; ++i) pre[i + 1] = pre[i] * q[i];
    suf[N] = 1.0;
    for (size_t i = N; i-- > 0;) suf[i] = suf[i + 1] * q[i];
    Vec g = Vec::zero(m);
    for (size_t i = 0; i < N; ++i) {
      double Pi = pre[i] * suf[i + 1];
      Vec d = u - wells[i];
      double f = (power == 1) ? 2.0 : 4.0 * norm2(d);
      g = g + (Pi * f) * d;
    }
    return scale * g;
  }

  Mat hessian(const Vec& u) const {
    size_t N = wells.size();
    std::vector<double> q(N);
    std::vector<Vec> d(N), gq(N);  // gq_i = grad of q_i
    std::vector<Mat> Hq(N);        // Hq_i = hessian of q_i
    for (size_t i = 0; i < N; ++i) {
      d[i] = u - wells[i];
      double r2 = norm2(d[i]);
      if (power == 1) {
        q[i] = r2;
        gq[i] = 2.0 * d[i];
        Hq[i] = 2.0 * Mat::identity(m);
      } else {
        q[i] = r2 * r2;
        gq[i] = (4.0 * r2) * d[i];
        Hq[i] = (4.0 * r2) * Mat::identity(m) + 8.0 * outer(d[i], d[i]);
      }
    }
    std::vector<double> pre(N + 1), suf(N + 1);
    pre[0] = 1.0;
    for (size_t i = 0; i < N; ++i) pre[i + 1] = pre[i] * q[i];
    suf[N] = 1.0;
    for (size_t i = N; i-- > 0;) suf[i] = suf[i + 1] * q[i];

    Mat H = Mat::zero(m);
    for (size_t i = 0; i < N; ++i) {
      double Pi = pre[i] * suf[i + 1];
      H = H + Pi * Hq[i];
      // cross terms: P_ij = prod over k != i,j, via prefix/suffix with q_i
      // struck out of the list
      std::vector<double> pre2(N + 1), suf2(N + 1);
      pre2[0] = 1.0;
      for (size_t k = 0; k < N; ++k) pre2[k + 1] = pre2[k] * (k == i ? 1.0 : q[k]);
      suf2[N] = 1.0;
      for (size_t k = N; k-- > 0;) suf2[k] = suf2[k + 1] * (k == i ? 1.0 : q[k]);
      for (size_t j = 0; j < N; ++j) {
        if (j == i) continue;
        double Pij = pre2[j] * suf2[j + 1];
        H = H + Pij * outer(gq[i], gq[j]);
      }
    }
    return scale * H;
  }

  int nearest_well(const Vec& u) const {
    int best = 0;
    double bd = norm2(u - wells[0]);
    for (size_t i = 1; i < wells.size(); ++i) {
      double di = norm2(u - wells[i]);
      if (di < bd) {
        bd = di;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  double max_orbit_norm() const {
    double r = 0;
    for (const Vec& b : wells) r = std::max(r, norm(b));
    return r;
  }

  // Half the distance from wells[0] to its nearest distinct neighbour.
  double well_separation() const {
    double d = 1e300;
    for (size_t i = 1; i < wells.size(); ++i)
      d = std::min(d, norm(wells[i] - wells[0]));
    return wells.size() > 1 ? d / 2.0 : 1e300;
  }

  // Sampled Lipschitz bound for the gradient on the ball the flow lives in.
  double lipschitz_gradient(double radius) const {
    double L = 0;
    int K = (m == 1) ? 33 : (m == 2 ? 24 : 12);
    for (int ir = 0; ir <= K; ++ir) {
      double r = radius * ir / K;
      int nd = (m == 1) ? 2 : (m == 2 ? 16 : 26);
      for (int id = 0; id < nd; ++id) {
        Vec dir = Vec::zero(m);
        if (m == 1) {
          dir[0] = (id == 0) ? 1.0 : -1.0;
        } else if (m == 2) {
          double th = 2.0 * M_PI * id / nd;
          dir = Vec{std::cos(th), std::sin(th)};
        } else {
          int a = id % 3 - 1, b = (id / 3) % 3 - 1, c = (id / 9) % 3 - 1;
          if (a == 0 && b == 0 && c == 0) continue;
          dir = normalized(Vec{double(a), double(b), double(c)});
        }
        SymEigen e = eigen_sym(hessian(r * dir));
        for (int i = 0; i < m; ++i) L = std::max(L, std::abs(e.values[i]));
      }
    }
    return L;
  }
};

// Number of distinct minima: the orbit size |Gamma| / |Gamma_a|.
inline int count_minima(const ReflectionGroup& Gamma, const Vec& a) {
  return Gamma.order() /
         static_cast<int>(stabilizer(Gamma.elements, a).size());
}

inline Potential orbit_product(const ReflectionGroup& Gamma, const Vec& a,
                               double scale = 1.0, bool degenerate = false) {
  if (Gamma.kind != GroupKind::Finite)
    throw BadParams("orbit products need a finite symmetry group");
  if (a.d != Gamma.dim) throw BadParams("minimum has the wrong dimension");
  Potential W;
  W.m = Gamma.dim;
  W.scale = scale;
  W.power = degenerate ? 2 : 1;
  W.kind = degenerate ? "orbit_product_degenerate" : "orbit_product";
  double tol = 1e-9 * std::max(1.0, norm(a));
  for (const IsometryElement& g : Gamma.elements) {
    Vec b = g.apply(a);
    bool dup = false;
    for (const Vec& w : W.wells)
      if (norm(w - b) < tol) dup = true;
    if (!dup) W.wells.push_back(b);
  }
  return W;
}

struct HypothesesReport {
  bool invariance_ok = false;
  bool growth_ok = false;
  double M = 0;             // radius used for the growth check
  bool unique_zero_ok = false;
  int zeros_in_chamber = 0;
  bool h3_ok = false;
  double q_star = 0;        // largest validated radial-convexity radius
  bool all_ok = false;
};

namespace detail {

inline std::vector<Vec> sphere_samples(int m, int count) {
  std::vector<Vec> dirs;
  if (m == 1) {
    Vec p(1), n(1);
    p[0] = 1.0;
    n[0] = -1.0;
    dirs = {p, n};
  } else if (m == 2) {
    for (int i = 0; i < count; ++i) {
      double th = 2.0 * M_PI * i / count;
      dirs.push_back(Vec{std::cos(th), std::sin(th)});
    }
  } else {
    // Fibonacci spiral
    double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = golden * i;
      dirs.push_back(Vec{r * std::cos(th), r * std::sin(th), z});
    }
  }
  return dirs;
}

}  // namespace detail

// Checks the structural hypotheses on W against the chamber Phi that the
// configured minimum lives in: Gamma-invariance and gradient equivariance,
// radial growth past |u| = M, a unique zero in the closed chamber within the
// ball, and positive radial second derivatives near the minimum.
inline HypothesesReport check_hypotheses(const Potential& W,
                                         const ReflectionGroup& Gamma,
                                         const std::vector<Wall>& chamber,
                                         double M = 0) {
  HypothesesReport rep;
  int m = W.m;
  double r_orb = W.max_orbit_norm();
  rep.M = (M > 0) ? M : 2.0 * std::max(r_orb, 1e-12);

  // invariance of W and equivariance of the gradient on sample points
  rep.invariance_ok = true;
  std::vector<Vec> dirs = detail::sphere_samples(m, m == 3 ? 26 : 16);
  for (const Vec& dir : dirs)
    for (double r : {0.3 * rep.M, 0.7 * rep.M, 1.1 * rep.M}) {
      Vec u = r * dir;
      double wu = W.value(u);
      Vec gu = W.gradient(u);
      for (const IsometryElement& g : Gamma.elements) {
        Vec v = g.apply(u);
        if (std::abs(W.value(v) - wu) > 1e-8 * (1.0 + std::abs(wu)))
          rep.invariance_ok = false;
        Vec expect = mul(g.linear, gu);
        if (norm(W.gradient(v) - expect) > 1e-8 * (1.0 + norm(gu)))
          rep.invariance_ok = false;
      }
    }

  // growth: along each direction, W does not decrease past radius M
  rep.growth_ok = true;
  std::vector<Vec> gdirs = detail::sphere_samples(m, m == 3 ? 64 : 32);
  for (const Vec& dir : gdirs) {
    double prev = W.value(rep.M * dir);
    if (!(prev > 0)) rep.growth_ok = false;
    for (double s : {1.5, 2.0, 4.0}) {
      double cur = W.value(s * rep.M * dir);
      if (cur < prev * (1.0 - 1e-12)) rep.growth_ok = false;
      prev = cur;
    }
  }

  // zeros of the product are exactly the wells; count those in the chamber
  for (const Vec& b : W.wells) {
    bool inside = norm(b) <= rep.M + 1e-9;
    for (const Wall& w : chamber)
      if (w.signed_dist(b) > 1e-9) inside = false;
    if (inside) ++rep.zeros_in_chamber;
  }
  rep.unique_zero_ok = (rep.zeros_in_chamber == 1);

  // radial convexity around the base well out to the largest working radius
  const Vec& a = W.wells[0];
  double q_max = std::min(W.well_separation(), rep.M - norm(a));
  std::vector<Vec> hdirs = detail::sphere_samples(m, m == 3 ? 96 : 48);
  int levels = 64;
  rep.q_star = 0;
  for (int j = 1; j <= levels; ++j) {
    double qr = q_max * j / levels;
    bool ok = true;
    for (const Vec& nu : hdirs) {
      Mat H = W.hessian(a + qr * nu);
      if (dot(nu, mul(H, nu)) <= 0) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    rep.q_star = qr;
  }
  rep.h3_ok = rep.q_star > 0;

  rep.all_ok = rep.invariance_ok && rep.growth_ok && rep.unique_zero_ok && rep.h3_ok;
  return rep;
}

}  // namespace equiflow
