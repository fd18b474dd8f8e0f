#pragma once

// Parabolic gradient flow with equivariant symmetrization. The explicit
// Euler step is the exact gradient descent of the discrete energy, so the
// recorded energy trace is monotone up to roundoff whenever the
// symmetrization is a node permutation.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "equiflow/errors.hpp"
#include "equiflow/field.hpp"
#include "equiflow/grid.hpp"
#include "equiflow/homomorphism.hpp"
#include "equiflow/potential.hpp"
#include "equiflow/regions.hpp"
#include "equiflow/util.hpp"

namespace equiflow {

// Averages u over the point group: u(x) <- (1/|G0|) sum f(g)^-1 u(gx).
// On node-compatible grids gx is a node and the average is exact; otherwise
// u(gx) is interpolated (reported by `exact`).
class Symmetrizer {
 public:
  const Grid* grid = nullptr;
  int m = 0;
  bool exact = false;

  Symmetrizer() = default;

  Symmetrizer(const Grid& g, const Homomorphism& f) : grid(&g) {
    m = f.target.dim;
    const std::vector<IsometryElement>& pts = f.source.elements;
    size_t K = pts.size();
    size_t N = size_t(g.node_count());
    finv_.reserve(K);
    gs_.reserve(K);
    for (const IsometryElement& e : pts) {
      gs_.push_back(e);
      finv_.push_back(transpose(f.map(e).linear));
    }
    exact = true;
    for (const IsometryElement& e : pts)
      if (!g.index_map(e).exact) exact = false;
    if (exact) {
      perm_.assign(K * N, -1);
      for (size_t ei = 0; ei < K; ++ei) {
        IndexMap im = g.index_map(pts[ei]);
        for (size_t i = 0; i < N; ++i) {
          LIndex3 v = g.apply_index_map(im, g.idx[i]);
          int32_t j = g.node_at_wrapped(v);
          if (j < 0) {
            exact = false;
            break;
          }
          perm_[ei * N + i] = j;
        }
        if (!exact) break;
      }
      if (!exact) perm_.clear();
    }
  }

  size_t group_order() const { return finv_.size(); }

  void apply(Field& u) const {
    const Grid& g = *grid;
    size_t N = size_t(g.node_count());
    size_t K = finv_.size();
    if (K <= 1) return;
    std::vector<double> out(N * m, 0.0);
    double inv = 1.0 / double(K);
    if (exact) {
      parallel_for(int64_t(N), [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
          Vec acc = Vec::zero(m);
          for (size_t ei = 0; ei < K; ++ei) {
            const double* p = u.v.data() + size_t(perm_[ei * N + i]) * m;
            const Mat& F = finv_[ei];
            for (int r = 0; r < m; ++r) {
              double s = 0;
              for (int c = 0; c < m; ++c) s += F(r, c) * p[c];
              acc[r] += s;
            }
          }
          for (int r = 0; r < m; ++r) out[size_t(i) * m + r] = acc[r] * inv;
        }
      });
    } else {
      parallel_for(int64_t(N), [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
          Vec acc = Vec::zero(m);
          for (size_t ei = 0; ei < K; ++ei) {
            Vec val = u.sample(gs_[ei].apply(g.pos[size_t(i)]));
            acc = acc + mul(finv_[ei], val);
          }
          for (int r = 0; r < m; ++r) out[size_t(i) * m + r] = acc[r] * inv;
        }
      });
    }
    u.v.swap(out);
  }

 private:
  std::vector<int32_t> perm_;
  std::vector<Mat> finv_;
  std::vector<IsometryElement> gs_;
};

// Discrete energy: the Lyapunov function of the explicit Euler step.
// Edge quadrature (V * lap_coef / 2) * sum_edges |u_i - u_j|^2 equals the
// forward-difference h^{n-2}/2 form on cubic grids and the linear-element
// form on triangular ones.
inline double energy(const Field& u, const Potential& W, double scale_c) {
  const Grid& g = *u.grid;
  int N = g.node_count();
  int half = g.degree / 2;
  double edge = 0, pot = 0;
  for (int i = 0; i < N; ++i) {
    const double* pi = u.v.data() + size_t(i) * u.m;
    for (int d = 0; d < half; ++d) {
      int32_t j = g.nbr[size_t(i) * g.degree + d];
      if (j < 0) continue;
      const double* pj = u.v.data() + size_t(j) * u.m;
      for (int c = 0; c < u.m; ++c) {
        double dv = pi[c] - pj[c];
        edge += dv * dv;
      }
    }
    pot += W.value(u.at(i));
  }
  return g.node_volume * (0.5 * g.lap_coef * edge + scale_c * pot);
}

// One explicit Euler step into `next`; returns sup_x |u_t(x)|.
// Missing ball neighbors contribute nothing (mirrored ghost values).
inline double flow_step(const Field& u, Field& next, const Potential& W,
                        double scale_c, double dt, double blowup_bound) {
  const Grid& g = *u.grid;
  int N = g.node_count();
  int deg = g.degree;
  int m = u.m;
  std::vector<double> chunk_max(size_t(worker_count()), 0.0);
  std::vector<double> chunk_sup(size_t(worker_count()), 0.0);
  int workers = worker_count();
  int64_t per = (int64_t(N) + workers - 1) / workers;
  parallel_for(int64_t(N), [&](int64_t b, int64_t e) {
    size_t slot = size_t(per > 0 ? b / per : 0);
    if (slot >= chunk_max.size()) slot = chunk_max.size() - 1;
    double local_rate = 0, local_sup = 0;
    for (int64_t i = b; i < e; ++i) {
      const double* pi = u.v.data() + size_t(i) * m;
      Vec ui = u.at(int(i));
      Vec rhs = (-scale_c) * W.gradient(ui);
      for (int d = 0; d < deg; ++d) {
        int32_t j = g.nbr[size_t(i) * deg + d];
        if (j < 0) continue;
        const double* pj = u.v.data() + size_t(j) * m;
        for (int c = 0; c < m; ++c) rhs[c] += g.lap_coef * (pj[c] - pi[c]);
      }
      double rn = 0, un = 0;
      double* po = next.v.data() + size_t(i) * m;
      for (int c = 0; c < m; ++c) {
        rn += rhs[c] * rhs[c];
        po[c] = pi[c] + dt * rhs[c];
        un += po[c] * po[c];
      }
      if (rn > local_rate) local_rate = rn;
      if (un > local_sup) local_sup = un;
    }
    if (local_rate > chunk_max[slot]) chunk_max[slot] = local_rate;
    if (local_sup > chunk_sup[slot]) chunk_sup[slot] = local_sup;
  });
  double rate = 0, sup = 0;
  for (double v : chunk_max) rate = std::max(rate, v);
  for (double v : chunk_sup) sup = std::max(sup, v);
  if (std::sqrt(sup) > blowup_bound)
    throw Blowup("field norm " + std::to_string(std::sqrt(sup)) +
                 " exceeds 10 M; reduce dt or h");
  return std::sqrt(rate);
}

// Interior PDE residual sup |lap u - scale_c W_u(u)|, excluding the two
// outermost shells of a ball mask (staircase boundary).
inline double pde_residual(const Field& u, const Potential& W,
                           double scale_c) {
  const Grid& g = *u.grid;
  std::vector<uint8_t> depth = g.boundary_depth();
  int N = g.node_count();
  double best = 0;
  for (int i = 0; i < N; ++i) {
    if (depth[i] != 255) continue;
    Vec ui = u.at(i);
    Vec rhs = (-scale_c) * W.gradient(ui);
    for (int d = 0; d < g.degree; ++d) {
      int32_t j = g.nbr[size_t(i) * g.degree + d];
      if (j < 0) continue;
      Vec uj = u.at(j);
      rhs = rhs + g.lap_coef * (uj - ui);
    }
    best = std::max(best, norm(rhs));
  }
  return best;
}

enum class InitMode { MinimaInterpolation, SeededRandom, FromFile };

// Projects every node value onto its own copy of the Phi chamber:
// u(x) <- f(w) proj_Phi(f(w)^-1 u(x)) with x = w(xbar). Commutes with
// equivariance, and on F-bar nodes (w = identity) reduces to the plain
// chamber projection.
inline void project_into_copies(Field& u, const Regions& reg) {
  const Grid& g = *u.grid;
  int N = g.node_count();
  for (int i = 0; i < N; ++i) {
    FoldResult fr = reg.f.source.fold(g.pos[i]);
    Mat F = reg.f.map(fr.word).linear;
    Vec local = mul(transpose(F), u.at(i));
    Vec proj = project_onto_chamber(reg.chamber, local);
    u.set(i, mul(F, proj));
  }
}

inline Field init_field(const Grid& grid, InitMode mode, const Regions& reg,
                        const Symmetrizer& sym, uint64_t seed = 0,
                        const std::string& path = std::string()) {
  int m = reg.f.target.dim;
  Field u(grid, m);
  int N = grid.node_count();
  switch (mode) {
    case InitMode::MinimaInterpolation: {
      for (int i = 0; i < N; ++i) {
        FoldResult fr = reg.f.source.fold(grid.pos[i]);
        u.set(i, mul(reg.f.map(fr.word).linear, reg.a));
      }
      // a few diffusion sweeps to take the edge off the copy boundaries
      Field tmp(grid, m);
      for (int sweep = 0; sweep < 5; ++sweep) {
        for (int i = 0; i < N; ++i) {
          Vec acc = Vec::zero(m);
          int cnt = 0;
          for (int d = 0; d < grid.degree; ++d) {
            int32_t j = grid.nbr[size_t(i) * grid.degree + d];
            if (j < 0) continue;
            acc = acc + u.at(j);
            ++cnt;
          }
          Vec ui = u.at(i);
          tmp.set(i, cnt ? 0.5 * ui + (0.5 / cnt) * acc : ui);
        }
        u.v.swap(tmp.v);
      }
      break;
    }
    case InitMode::SeededRandom: {
      Rng rng(seed);
      double r = norm(reg.a) > 0 ? norm(reg.a) : 1.0;
      for (double& x : u.v) x = rng.uniform(-r, r);
      break;
    }
    case InitMode::FromFile: {
      Field file = read_field_csv(grid, path);
      if (file.m != m)
        throw FileFormat(path + ": field has " + std::to_string(file.m) +
                         " components, expected " + std::to_string(m));
      u = file;
      break;
    }
  }
  sym.apply(u);
  project_into_copies(u, reg);
  return u;
}

struct FlowParams {
  double scale_c = 1.0;
  double dt = 0.0;  // 0: stability formula below
  int k_sym = 1;
  int k_log = 100;
  double tol_rate = 1e-6;
  int64_t max_steps = 500000;
  double M = 0.0;  // sup bound for blowup detection; 0: 2 * max orbit norm
};

struct FlowResult {
  Field field;
  std::vector<std::pair<int64_t, double>> energy_trace;
  double final_step_norm = 0;
  double pde_residual = 0;
  int64_t iterations = 0;
  double dt = 0;
  bool symmetrization_exact = true;
};

// Stability: explicit Euler needs dt <= 2/(4n/h^2 + scale_c L). The factor
// 0.2 and the h^2 inside the reaction term keep at least a 3x margin. L is
// sampled where the trajectory actually lives (the convex hull of the wells
// plus 10%), not out at |u| = M: product potentials grow so fast that the
// global bound would stall the flow for no stability benefit.
inline double stable_dt(const Grid& g, const Potential& W, double scale_c) {
  double L = W.lipschitz_gradient(1.1 * W.max_orbit_norm());
  double h2 = g.h * g.h;
  return 0.2 * h2 / (g.n + 0.15 * h2 * scale_c * L);
}

inline FlowResult run_flow(Field u, const Potential& W, const Symmetrizer& sym,
                           const FlowParams& p) {
  const Grid& g = *u.grid;
  FlowResult out;
  out.symmetrization_exact = sym.group_order() <= 1 || sym.exact;
  double M = p.M > 0 ? p.M : 2.0 * W.max_orbit_norm();
  double blowup = 10.0 * M;
  double dt = p.dt > 0 ? p.dt : stable_dt(g, W, p.scale_c);
  out.dt = dt;

  Field next(g, u.m);
  double J = energy(u, W, p.scale_c);
  out.energy_trace.emplace_back(0, J);
  int64_t last_logged = 0;
  double rate = 0;
  int64_t step = 0;
  for (; step < p.max_steps; ++step) {
    rate = flow_step(u, next, W, p.scale_c, dt, blowup);
    u.v.swap(next.v);
    int64_t done = step + 1;
    if (p.k_sym > 0 && done % p.k_sym == 0) sym.apply(u);
    bool converged = rate < p.tol_rate;
    if (done % p.k_log == 0 || converged || done == p.max_steps) {
      double Jn = energy(u, W, p.scale_c);
      double span = double(done - last_logged);
      if (Jn > J + 1e-12 * (1.0 + std::abs(J)) * std::max(1.0, span))
        throw NonMonotone("energy rose from " + std::to_string(J) + " to " +
                          std::to_string(Jn) + " at step " +
                          std::to_string(done));
      out.energy_trace.emplace_back(done, Jn);
      J = Jn;
      last_logged = done;
      if (converged) {
        step = done;
        break;
      }
    }
  }
  out.iterations = std::min(step, p.max_steps);
  out.final_step_norm = rate;
  out.pde_residual = pde_residual(u, W, p.scale_c);
  out.field = std::move(u);
  return out;
}

// v_R(y) = u_R(y / R): same node values on a grid stretched by R. The
// residual of v against the unit-scale equation matches the residual of u
// against the scale-R^2 equation up to the same discretization.
inline Grid rescale_grid(const Grid& g, double R) {
  Grid out = g;
  out.h = g.h * R;
  out.R = g.R * R;
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < g.n; ++c) {
      out.E(r, c) = g.E(r, c) * R;
      out.Einv(r, c) = g.Einv(r, c) / R;
    }
  out.lap_coef = g.lap_coef / (R * R);
  out.node_volume = g.node_volume * std::pow(R, g.n);
  for (size_t i = 0; i < out.pos.size(); ++i) out.pos[i] = R * g.pos[i];
  return out;
}

}  // namespace equiflow
