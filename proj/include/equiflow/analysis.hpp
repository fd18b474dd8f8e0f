#pragma once

// Post-hoc verification of converged fields: equivariance, positivity,
// decay profiles, periodicity, and the copy/color correspondence. All pure.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>
#include <vector>

#include "equiflow/errors.hpp"
#include "equiflow/field.hpp"
#include "equiflow/flow.hpp"
#include "equiflow/grid.hpp"
#include "equiflow/potential.hpp"
#include "equiflow/regions.hpp"

namespace equiflow {

// An F-bar node together with its representative coordinates. On period
// cells the stored position is a wrap representative that may sit in a
// lattice translate of the fundamental domain; x is the translate that
// actually lies in F-bar. Using u(node) at x is sound because cell runs
// require the lattice to act trivially on the target.
struct FBarNode {
  int32_t node = -1;
  Vec x;
};

namespace detail {

// Visit x and (on cells) its nearby lattice translates.
template <class Fn>
inline void for_lattice_translates(const Grid& g, const ReflectionGroup& G,
                                   const Vec& x, Fn&& fn) {
  if (g.domain != DomainKind::Cell || G.lattice.empty()) {
    fn(x);
    return;
  }
  int rank = int(G.lattice.size());
  int lim = 3;
  int k0 = rank >= 1 ? lim : 0;
  int k1 = rank >= 2 ? lim : 0;
  int k2 = rank >= 3 ? lim : 0;
  for (int a = -k0; a <= k0; ++a)
    for (int b = -k1; b <= k1; ++b)
      for (int c = -k2; c <= k2; ++c) {
        Vec y = x;
        y = y + double(a) * G.lattice[0];
        if (rank >= 2) y = y + double(b) * G.lattice[1];
        if (rank >= 3) y = y + double(c) * G.lattice[2];
        fn(y);
      }
}

}  // namespace detail

// Nodes representing the closed fundamental domain of G. The domain has
// diameter below the lattice spacing, so each node class meets it at most
// once and the representative is unique.
inline std::vector<FBarNode> fbar_nodes(const Grid& g,
                                        const ReflectionGroup& G) {
  std::vector<FBarNode> out;
  int N = g.node_count();
  for (int i = 0; i < N; ++i) {
    bool found = false;
    FBarNode fb;
    detail::for_lattice_translates(g, G, g.pos[i], [&](const Vec& y) {
      if (!found && G.in_domain_closed(y)) {
        found = true;
        fb.node = i;
        fb.x = y;
      }
    });
    if (found) out.push_back(fb);
  }
  return out;
}

// max over point-group g and nodes x of |u(gx) - f(g) u(x)|.
inline double equivariance_residual(const Field& u, const Homomorphism& f) {
  const Grid& g = *u.grid;
  int N = g.node_count();
  double best = 0;
  for (const IsometryElement& e : f.source.elements) {
    if (is_identity(e)) continue;
    Mat F = f.map(e).linear;
    IndexMap im = g.index_map(e);
    bool node_exact = im.exact;
    std::vector<int32_t> target(node_exact ? size_t(N) : 0, -1);
    if (node_exact) {
      for (int i = 0; i < N; ++i) {
        target[size_t(i)] = g.node_at_wrapped(g.apply_index_map(im, g.idx[i]));
        if (target[size_t(i)] < 0) {
          node_exact = false;
          break;
        }
      }
    }
    for (int i = 0; i < N; ++i) {
      Vec lhs = node_exact ? u.at(target[size_t(i)])
                           : u.sample(e.apply(g.pos[i]));
      best = std::max(best, norm(lhs - mul(F, u.at(i))));
    }
  }
  return best;
}

// max over F-bar nodes of the distance from u(x) to the Phi chamber.
inline double positivity_violation(const Field& u, const Regions& reg,
                                   const std::vector<FBarNode>& fbar) {
  double best = 0;
  for (const FBarNode& fb : fbar) {
    Vec v = u.at(fb.node);
    best = std::max(best, norm(v - project_onto_chamber(reg.chamber, v)));
  }
  return best;
}

struct DecayFit {
  double k = 0;      // rate
  double K = 0;      // amplitude
  double r2 = 0;
  double d_min = 0;
  int sample_count = 0;
  bool fitted = false;
  bool envelope_ok = false;
  double envelope_slack = 0;  // largest increase seen between bins
};

// Samples |u - a| against the (scaled) distance to the boundary of D.
// dist_scale is 1 on balls and R on period cells. Fits log|u-a| linearly
// beyond d_min unless the well is degenerate; always checks that the
// binned running max is non-increasing.
inline DecayFit decay_profile_and_fit(const Field& u, const Regions& reg,
                                      double d_min, double dist_scale,
                                      bool degenerate) {
  const Grid& g = *u.grid;
  int N = g.node_count();
  DecayFit out;
  out.d_min = d_min;
  // in_D and the boundary distance are translation invariant (they fold x
  // first), so stored wrap representatives are fine here.
  std::vector<std::pair<double, double>> samples;  // (scaled d, |u - a|)
  for (int i = 0; i < N; ++i) {
    if (!reg.in_D(g.pos[i])) continue;
    double d = distance_to_boundary_D(reg, g.pos[i]) * dist_scale;
    if (d < d_min) continue;
    samples.emplace_back(d, norm(u.at(i) - reg.a));
  }
  if (samples.empty()) throw TooFewSamples("no nodes inside D beyond d_min");
  std::sort(samples.begin(), samples.end());

  double lo = samples.front().first;
  double dmax = samples.back().first;
  // Bins narrower than the grid spacing alias the envelope (a bin can miss
  // the slow decay direction entirely), so cap their number accordingly.
  double span = dmax - lo;
  int by_grid = int(span / (2.0 * g.h * dist_scale));
  int nbins = std::min<int>(64, std::max<int>(4, std::min<int>(
                                     int(samples.size() / 16), by_grid)));
  double width = span > 0 ? span / nbins : 1.0;
  std::vector<double> binmax(size_t(nbins), -1.0);
  for (const auto& s : samples) {
    int b = std::min(nbins - 1, int((s.first - lo) / width));
    binmax[size_t(b)] = std::max(binmax[size_t(b)], s.second);
  }
  out.envelope_ok = true;
  double running = -1;
  for (int b = 0; b < nbins; ++b) {
    if (binmax[size_t(b)] < 0) continue;  // empty bin
    if (running >= 0 && binmax[size_t(b)] > running) {
      out.envelope_slack =
          std::max(out.envelope_slack, binmax[size_t(b)] - running);
      if (binmax[size_t(b)] > running + 1e-9 * (1.0 + norm(reg.a)))
        out.envelope_ok = false;
    }
    running = running < 0 ? binmax[size_t(b)]
                          : std::min(running, binmax[size_t(b)]);
  }

  if (degenerate) return out;

  double floor = 1e3 * DBL_EPSILON;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int cnt = 0;
  for (const auto& s : samples) {
    if (s.second <= floor) continue;
    double x = s.first, y = std::log(s.second);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++cnt;
  }
  out.sample_count = cnt;
  if (cnt < 20)
    throw TooFewSamples("decay fit needs at least 20 samples beyond d_min, got " +
                        std::to_string(cnt));
  double det = cnt * sxx - sx * sx;
  if (std::abs(det) < 1e-30) throw TooFewSamples("degenerate abscissa spread");
  double slope = (cnt * sxy - sx * sy) / det;
  double icept = (sy - slope * sx) / cnt;
  out.k = -slope;
  out.K = std::exp(icept);
  double ss_tot = syy - sy * sy / cnt;
  double ss_res = 0;
  for (const auto& s : samples) {
    if (s.second <= floor) continue;
    double r = std::log(s.second) - (icept + slope * s.first);
    ss_res += r * r;
  }
  out.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  out.fitted = true;
  return out;
}

// Default fit cutoff: a few grid cells plus the interface width at a.
inline double default_d_min(const Grid& g, const Potential& W, const Vec& a,
                            double dist_scale = 1.0) {
  Mat H = W.hessian(a);
  SymEigen e = eigen_sym(H);
  double lmin = e.values[0];
  double width = lmin > 1e-12 ? 1.0 / std::sqrt(lmin) : 0.0;
  return 4.0 * g.h * dist_scale + width;
}

// max over lattice generators t and nodes of |u(x + t) - u(x)| (wrapped).
inline double periodicity_residual(const Field& u) {
  const Grid& g = *u.grid;
  if (g.domain != DomainKind::Cell) return 0.0;
  double best = 0;
  int N = g.node_count();
  for (int j = 0; j < g.lat_rank; ++j) {
    for (int i = 0; i < N; ++i) {
      LIndex3 v{int64_t(g.idx[i][0]) + g.lat[j][0],
                int64_t(g.idx[i][1]) + g.lat[j][1],
                int64_t(g.idx[i][2]) + g.lat[j][2]};
      int32_t t = g.node_at_wrapped(v);
      if (t < 0) return 1e300;  // wrap misconfigured
      best = std::max(best, norm(u.at(t) - u.at(i)));
    }
  }
  return best;
}

struct CopyRow {
  std::string element;  // short description of g
  double residual = 0;  // max over F-bar nodes of dist(f(g)^-1 u(gx), Phi)
  int color = -1;       // nearest well to the copy's deep-interior average
  int expected = -1;    // nearest well to f(g) a
  bool ok = false;
};

struct CopyReport {
  std::vector<CopyRow> rows;
  double max_residual = 0;
  bool colors_ok = true;
};

inline std::string describe_element(const IsometryElement& e) {
  char buf[160];
  int off = std::snprintf(buf, sizeof buf, "[");
  for (int r = 0; r < e.dim; ++r)
    for (int c = 0; c < e.dim; ++c)
      off += std::snprintf(buf + off, sizeof buf - size_t(off), "%s%.3g",
                           (r || c) ? " " : "", e.linear(r, c));
  std::snprintf(buf + off, sizeof buf - size_t(off), "]");
  return buf;
}

// Per point-group element: how far u(g F-bar) strays from f(g) Phi, and the
// copy's phase color against the predicted f(g) a.
inline CopyReport copy_correspondence_check(const Field& u, const Regions& reg,
                                            const Potential& W,
                                            const std::vector<FBarNode>& fbar) {
  const Grid& g = *u.grid;
  CopyReport rep;
  const ReflectionGroup& src = reg.f.source;

  // deep-interior F-bar nodes: farthest from the chamber walls
  double best_margin = 0;
  std::vector<double> margin(fbar.size(), 0.0);
  for (size_t s = 0; s < fbar.size(); ++s) {
    double m = 1e300;
    for (const Wall& w : src.walls)
      m = std::min(m, -w.signed_dist(fbar[s].x));
    margin[s] = m;
    best_margin = std::max(best_margin, m);
  }

  for (const IsometryElement& e : src.elements) {
    CopyRow row;
    row.element = describe_element(e);
    Mat F = reg.f.map(e).linear;
    Mat Finv = transpose(F);
    IndexMap im = g.index_map(e);
    Vec acc = Vec::zero(u.m);
    int acc_n = 0;
    double res = 0;
    for (size_t s = 0; s < fbar.size(); ++s) {
      int32_t i = fbar[s].node;
      Vec ugx;
      if (im.exact) {
        int32_t t = g.node_at_wrapped(g.apply_index_map(im, g.idx[i]));
        ugx = t >= 0 ? u.at(t) : u.sample(e.apply(fbar[s].x));
      } else {
        ugx = u.sample(e.apply(fbar[s].x));
      }
      Vec local = mul(Finv, ugx);
      res = std::max(res,
                     norm(local - project_onto_chamber(reg.chamber, local)));
      if (margin[s] >= 0.5 * best_margin) {
        acc = acc + ugx;
        ++acc_n;
      }
    }
    row.residual = res;
    if (acc_n > 0) {
      row.color = W.nearest_well((1.0 / acc_n) * acc);
      row.expected = W.nearest_well(mul(F, reg.a));
      row.ok = row.color == row.expected;
    }
    rep.max_residual = std::max(rep.max_residual, res);
    if (!row.ok) rep.colors_ok = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace equiflow
