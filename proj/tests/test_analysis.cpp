#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "equiflow/analysis.hpp"
#include "equiflow/flow.hpp"
#include "equiflow/group_catalog.hpp"
#include "equiflow/hom_catalog.hpp"
#include "equiflow/potential.hpp"
#include "equiflow/regions.hpp"

using namespace equiflow;

namespace {

Homomorphism identity_dn(int n) {
  HomParams hp;
  hp.group = "Dn";
  hp.group_params.n = n;
  return catalog_homomorphism("identity", hp);
}

// odd profile approaching +-1 at rate k with amplitude K
Field synthetic_decay(const Grid& g, double K, double k) {
  Field u(g, 1);
  for (int i = 0; i < g.node_count(); ++i) {
    double x = g.pos[i][0];
    double s = x < 0 ? -1.0 : 1.0;
    u.v[size_t(i)] = s * (1.0 - K * std::exp(-k * std::abs(x)));
  }
  return u;
}

}  // namespace

TEST_CASE("decay fit recovers a planted exponential") {
  Homomorphism f = identity_dn(1);
  Vec a = Vec::zero(1);
  a[0] = 1.0;
  Regions reg = build_regions(f, a);
  Grid g = make_ball_grid(1, 12.0, 0.05, StencilKind::Cubic);
  Field u = synthetic_decay(g, 0.8, 1.5);

  DecayFit fit = decay_profile_and_fit(u, reg, 1.0, 1.0, false);
  REQUIRE(fit.fitted);
  REQUIRE(fit.k == Catch::Approx(1.5).margin(1e-6));
  REQUIRE(fit.K == Catch::Approx(0.8).margin(1e-6));
  REQUIRE(fit.r2 > 0.999999);
  REQUIRE(fit.envelope_ok);
  REQUIRE(fit.sample_count >= 200);
}

TEST_CASE("envelope check flags a bump in the tail") {
  Homomorphism f = identity_dn(1);
  Vec a = Vec::zero(1);
  a[0] = 1.0;
  Regions reg = build_regions(f, a);
  Grid g = make_ball_grid(1, 12.0, 0.05, StencilKind::Cubic);
  Field u = synthetic_decay(g, 0.8, 1.5);
  for (int i = 0; i < g.node_count(); ++i) {
    double x = g.pos[i][0];
    double b = 0.3 * std::exp(-((std::abs(x) - 6.0) / 0.3) *
                              ((std::abs(x) - 6.0) / 0.3));
    u.v[size_t(i)] -= (x < 0 ? -b : b);
  }
  DecayFit fit = decay_profile_and_fit(u, reg, 1.0, 1.0, false);
  REQUIRE_FALSE(fit.envelope_ok);
  REQUIRE(fit.envelope_slack > 0.1);
}

TEST_CASE("degenerate wells skip the fit but keep the envelope") {
  Homomorphism f = identity_dn(1);
  Vec a = Vec::zero(1);
  a[0] = 1.0;
  Regions reg = build_regions(f, a);
  Grid g = make_ball_grid(1, 12.0, 0.05, StencilKind::Cubic);
  Field u = synthetic_decay(g, 0.8, 1.5);
  DecayFit fit = decay_profile_and_fit(u, reg, 1.0, 1.0, true);
  REQUIRE_FALSE(fit.fitted);
  REQUIRE(fit.envelope_ok);
}

TEST_CASE("too few samples throws") {
  Homomorphism f = identity_dn(1);
  Vec a = Vec::zero(1);
  a[0] = 1.0;
  Regions reg = build_regions(f, a);
  Grid g = make_ball_grid(1, 12.0, 0.05, StencilKind::Cubic);
  Field u = synthetic_decay(g, 0.8, 1.5);
  REQUIRE_THROWS_AS(decay_profile_and_fit(u, reg, 50.0, 1.0, false),
                    TooFewSamples);
}

TEST_CASE("equivariance residual detects a corrupted node") {
  Homomorphism f = identity_dn(3);
  Vec a = Vec::zero(2);
  a[0] = 1.0;
  Regions reg = build_regions(f, a);
  Grid g = make_ball_grid(2, 3.0, 0.25, stencil_for_group(f.source));
  Symmetrizer sym(g, f);
  Field u = init_field(g, InitMode::MinimaInterpolation, reg, sym);
  REQUIRE(equivariance_residual(u, f) < 1e-12);

  // corrupt one generic node (off every mirror line)
  int pick = -1;
  for (int i = 0; i < g.node_count(); ++i) {
    if (norm(g.pos[i]) < 0.5) continue;
    bool on_wall = false;
    for (const IsometryElement& e : f.source.elements) {
      if (is_identity(e)) continue;
      if (norm(e.apply(g.pos[i]) - g.pos[i]) < 0.2) on_wall = true;
    }
    if (!on_wall) {
      pick = i;
      break;
    }
  }
  REQUIRE(pick >= 0);
  u.v[size_t(pick) * 2] += 0.1;
  REQUIRE(equivariance_residual(u, f) > 0.05);
}

TEST_CASE("fundamental domain nodes and copy correspondence on a cell") {
  Homomorphism f = catalog_homomorphism("fprime");
  Vec a = Vec::zero(2);
  a[0] = std::sqrt(3.0) / 2.0;
  a[1] = -0.5;
  Regions reg = build_regions(f, a);
  Potential W = orbit_product(f.target, a, 4.0);
  Grid g = make_cell_grid(f.source, 0.125, stencil_for_group(f.source));
  Symmetrizer sym(g, f);
  REQUIRE(sym.exact);
  Field u = init_field(g, InitMode::MinimaInterpolation, reg, sym);

  std::vector<FBarNode> fbar = fbar_nodes(g, f.source);
  REQUIRE(fbar.size() >= g.node_count() / 12u);
  for (const FBarNode& fb : fbar) {
    REQUIRE(f.source.in_domain_closed(fb.x));
    // stored representative differs from the node position by a lattice vector
    std::vector<double> c = f.source.lattice_coords(fb.x - g.pos[fb.node]);
    for (double ci : c) REQUIRE(std::abs(ci - std::round(ci)) < 1e-9);
  }

  REQUIRE(periodicity_residual(u) == 0.0);
  REQUIRE(positivity_violation(u, reg, fbar) < 1e-9);

  CopyReport rep = copy_correspondence_check(u, reg, W, fbar);
  REQUIRE(rep.rows.size() == f.source.elements.size());
  REQUIRE(rep.colors_ok);
  REQUIRE(rep.max_residual < 1e-9);
  for (const CopyRow& row : rep.rows) {
    REQUIRE(row.ok);
    REQUIRE(row.color == row.expected);
  }
}
