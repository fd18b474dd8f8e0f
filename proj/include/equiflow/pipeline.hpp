#pragma once

// Binds the config file to a full run: catalog lookups, grid assembly, the
// flow itself, analysis, artifact emission, and threshold checks.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "equiflow/analysis.hpp"
#include "equiflow/config.hpp"
#include "equiflow/field.hpp"
#include "equiflow/flow.hpp"
#include "equiflow/grid.hpp"
#include "equiflow/group_catalog.hpp"
#include "equiflow/hom_catalog.hpp"
#include "equiflow/images.hpp"
#include "equiflow/potential.hpp"
#include "equiflow/regions.hpp"

namespace equiflow {

struct RunConfig {
  std::string group;  // empty: the homomorphism's natural source
  CatalogParams gp;
  std::string hom = "identity";
  int hom_n = 2, hom_k = 2, hom_m = 1;

  std::string potential_kind = "product";
  double potential_scale = 1.0;
  std::vector<double> a;

  std::string domain = "ball";
  double R = 10.0;
  double h = 0.5;

  std::string init = "minima_interpolation";
  std::string init_path;
  uint64_t seed = 1;

  double dt = 0.0;
  double tol_rate = 1e-6;
  long long max_steps = 500000;
  int k_sym = 1;
  int k_log = 100;
  double M = 0.0;

  double d_min = 0.0;  // 0: automatic cutoff

  std::string outdir = "out";
  bool out_csv = true, out_pgm = true, out_ppm = true, out_summary = true;

  // check tolerances; 0 disables the check
  double check_equivariance = 0.0;
  double check_positivity = 0.0;
  double check_copy = 0.0;  // also requires the color correspondence
  bool check_envelope = false;
};

inline RunConfig load_run_config(const Config& c) {
  RunConfig r;
  r.group = c.get("group.name", r.group);
  r.gp.n = int(c.get_int("group.n", 3));
  r.gp.d = c.get_double("group.d", 1.0);
  r.hom = c.get("hom.name", r.hom);
  r.hom_n = int(c.get_int("hom.n", 2));
  r.hom_k = int(c.get_int("hom.k", 2));
  r.hom_m = int(c.get_int("hom.m", 1));

  r.potential_kind = c.get("potential.kind", r.potential_kind);
  if (r.potential_kind != "product" && r.potential_kind != "product_degenerate")
    throw ConfigError(c.where("potential.kind") +
                      ": potential.kind must be product or product_degenerate");
  r.potential_scale = c.get_double("potential.scale", 1.0);
  r.a = c.get_list("potential.a");
  if (r.a.empty())
    throw ConfigError(c.path + ": missing required key 'potential.a'");

  r.domain = c.get("domain.kind", r.domain);
  if (r.domain != "ball" && r.domain != "cell")
    throw ConfigError(c.where("domain.kind") +
                      ": domain.kind must be ball or cell");
  r.R = c.get_double("domain.R", r.domain == "ball" ? 10.0 : 1.0);
  r.h = c.get_double("domain.h", 0.5);

  r.init = c.get("init.mode", r.init);
  r.init_path = c.get("init.path", "");
  r.seed = uint64_t(c.get_int("flow.seed", 1));
  r.dt = c.get_double("flow.dt", 0.0);
  r.tol_rate = c.get_double("flow.tol_rate", 1e-6);
  r.max_steps = c.get_int("flow.max_steps", 500000);
  r.k_sym = int(c.get_int("flow.k_sym", 1));
  r.k_log = int(c.get_int("flow.k_log", 100));
  r.M = c.get_double("flow.M", 0.0);

  r.d_min = c.get_double("analysis.d_min", 0.0);

  r.outdir = c.get("output.dir", "out");
  std::string fmts = c.get("output.formats", "csv,pgm,ppm,summary");
  r.out_csv = fmts.find("csv") != std::string::npos;
  r.out_pgm = fmts.find("pgm") != std::string::npos;
  r.out_ppm = fmts.find("ppm") != std::string::npos;
  r.out_summary = fmts.find("summary") != std::string::npos;

  r.check_equivariance = c.get_double("check.equivariance", 0.0);
  r.check_positivity = c.get_double("check.positivity", 0.0);
  r.check_copy = c.get_double("check.copy", 0.0);
  r.check_envelope = c.get_bool("check.envelope", false);
  return r;
}

struct Assembly {
  Regions reg;  // reg.f carries the source and target groups
  Potential W;
  std::unique_ptr<Grid> grid;
  Symmetrizer sym;
  double scale_c = 1.0;
  double dist_scale = 1.0;
  bool degenerate = false;
};

inline Assembly build_assembly(const RunConfig& rc) {
  Assembly A;
  HomParams hp;
  hp.n = rc.hom_n;
  hp.k = rc.hom_k;
  hp.m = rc.hom_m;
  hp.group = rc.group;
  hp.group_params = rc.gp;
  Homomorphism f = catalog_homomorphism(rc.hom, hp);

  if (int(rc.a.size()) != f.target.dim)
    throw ConfigError("potential.a has " + std::to_string(rc.a.size()) +
                      " components; the target space has dimension " +
                      std::to_string(f.target.dim));
  Vec a = Vec::zero(f.target.dim);
  for (int i = 0; i < f.target.dim; ++i) a[i] = rc.a[size_t(i)];

  A.reg = build_regions(f, a);
  A.degenerate = rc.potential_kind == "product_degenerate";
  A.W = orbit_product(A.reg.f.target, A.reg.a, rc.potential_scale,
                      A.degenerate);

  if (rc.domain == "ball") {
    StencilKind st = f.source.dim == 2 ? stencil_for_group(f.source)
                                       : StencilKind::Cubic;
    A.grid = std::make_unique<Grid>(
        make_ball_grid(f.source.dim, rc.R, rc.h, st));
    A.scale_c = 1.0;
    A.dist_scale = 1.0;
  } else {
    if (f.source.kind != GroupKind::Discrete)
      throw ConfigError("cell domains need a discrete source group");
    StencilKind st = f.source.dim == 2 ? stencil_for_group(f.source)
                                       : StencilKind::Cubic;
    A.grid = std::make_unique<Grid>(make_cell_grid(f.source, rc.h, st));
    A.scale_c = rc.R * rc.R;
    A.dist_scale = rc.R;
  }
  A.sym = Symmetrizer(*A.grid, A.reg.f);
  return A;
}

struct CheckOutcome {
  std::string name;
  bool enabled = false;
  bool passed = true;
  double value = 0;
  double tolerance = 0;
};

struct RunReport {
  double energy_initial = 0, energy_final = 0;
  double equivariance = 0, positivity = 0, periodicity = 0;
  DecayFit decay;
  std::string decay_note;
  CopyReport copy;
  std::vector<CheckOutcome> checks;
  bool checks_passed = true;
};

struct SolveOutcome {
  Assembly assembly;
  FlowResult flow;
  RunReport report;
  std::string summary;
  std::vector<std::string> files;
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void analyze_field(const Field& u, Assembly& A, const RunConfig& rc,
                          RunReport& rep) {
  std::vector<FBarNode> fbar = fbar_nodes(*A.grid, A.reg.f.source);
  rep.equivariance = equivariance_residual(u, A.reg.f);
  rep.positivity = positivity_violation(u, A.reg, fbar);
  rep.periodicity = periodicity_residual(u);
  double d_min = rc.d_min;
  if (d_min <= 0) d_min = default_d_min(*A.grid, A.W, A.reg.a, A.dist_scale);
  try {
    rep.decay = decay_profile_and_fit(u, A.reg, d_min, A.dist_scale,
                                      A.degenerate);
  } catch (const TooFewSamples& e) {
    rep.decay_note = e.what();
  }
  rep.copy = copy_correspondence_check(u, A.reg, A.W, fbar);

  auto add_check = [&](const std::string& name, double tol, double value,
                       bool extra_ok = true) {
    CheckOutcome c;
    c.name = name;
    c.enabled = tol > 0;
    c.value = value;
    c.tolerance = tol;
    c.passed = !c.enabled || (value <= tol && extra_ok);
    if (c.enabled && !c.passed) rep.checks_passed = false;
    rep.checks.push_back(c);
  };
  add_check("equivariance", rc.check_equivariance, rep.equivariance);
  add_check("positivity", rc.check_positivity, rep.positivity);
  add_check("copy", rc.check_copy, rep.copy.max_residual,
            rep.copy.colors_ok);
  if (rc.check_envelope) {
    CheckOutcome c;
    c.name = "envelope";
    c.enabled = true;
    c.value = rep.decay.envelope_slack;
    c.passed = rep.decay.envelope_ok;
    if (!c.passed) rep.checks_passed = false;
    rep.checks.push_back(c);
  }
}

inline std::string make_summary(const RunConfig& rc, const Assembly& A,
                                const FlowResult* flow, const RunReport& rep,
                                int nodes) {
  std::ostringstream s;
  s << "group: " << A.reg.f.source.name << "\n";
  s << "group_order: "
    << (A.reg.f.source.kind == GroupKind::Finite
            ? std::to_string(A.reg.f.source.order())
            : std::string("discrete(point ") +
                  std::to_string(A.reg.f.source.elements.size()) + ")")
    << "\n";
  s << "homomorphism: " << rc.hom << "\n";
  s << "target: " << A.reg.f.target.name << "\n";
  s << "minimum: ";
  for (int i = 0; i < A.reg.f.target.dim; ++i)
    s << (i ? "," : "") << fmt_double(A.reg.a[i]);
  s << "\n";
  s << "wells: " << A.W.wells.size() << "\n";
  s << "domain: " << rc.domain << "\n";
  s << "R: " << fmt_double(rc.R) << "\n";
  s << "h: " << fmt_double(rc.h) << "\n";
  s << "stencil: "
    << (A.grid->stencil == StencilKind::Triangular ? "triangular" : "cubic")
    << "\n";
  s << "nodes: " << nodes << "\n";
  s << "scale_c: " << fmt_double(A.scale_c) << "\n";
  s << "mode: finite-R surrogate\n";
  if (flow) {
    s << "dt: " << fmt_double(flow->dt) << "\n";
    s << "steps: " << flow->iterations << "\n";
    s << "energy_initial: " << fmt_double(rep.energy_initial) << "\n";
    s << "energy_final: " << fmt_double(rep.energy_final) << "\n";
    s << "final_step_norm: " << fmt_double(flow->final_step_norm) << "\n";
    s << "pde_residual: " << fmt_double(flow->pde_residual) << "\n";
    s << "symmetrization_exact: "
      << (flow->symmetrization_exact ? "true" : "false") << "\n";
  }
  s << "equivariance_residual: " << fmt_double(rep.equivariance) << "\n";
  s << "positivity_violation: " << fmt_double(rep.positivity) << "\n";
  s << "periodicity_residual: " << fmt_double(rep.periodicity) << "\n";
  if (rep.decay.fitted) {
    s << "decay_k: " << fmt_double(rep.decay.k) << "\n";
    s << "decay_K: " << fmt_double(rep.decay.K) << "\n";
    s << "decay_r2: " << fmt_double(rep.decay.r2) << "\n";
  }
  s << "decay_samples: " << rep.decay.sample_count << "\n";
  s << "decay_d_min: " << fmt_double(rep.decay.d_min) << "\n";
  s << "envelope_ok: " << (rep.decay.envelope_ok ? "true" : "false") << "\n";
  if (!rep.decay_note.empty()) s << "decay_note: " << rep.decay_note << "\n";
  s << "copy_max_residual: " << fmt_double(rep.copy.max_residual) << "\n";
  s << "copy_colors_ok: " << (rep.copy.colors_ok ? "true" : "false") << "\n";
  for (const CheckOutcome& c : rep.checks) {
    if (!c.enabled) continue;
    s << "check_" << c.name << ": " << (c.passed ? "pass" : "fail") << " ("
      << fmt_double(c.value)
      << (c.tolerance > 0 ? " vs " + fmt_double(c.tolerance) : "") << ")\n";
  }
  s << "checks_passed: " << (rep.checks_passed ? "true" : "false") << "\n";
  return s.str();
}

}  // namespace detail

inline SolveOutcome run_solve(const RunConfig& rc) {
  SolveOutcome out;
  out.assembly = build_assembly(rc);
  Assembly& A = out.assembly;

  InitMode mode;
  if (rc.init == "minima_interpolation") {
    mode = InitMode::MinimaInterpolation;
  } else if (rc.init == "seeded_random") {
    mode = InitMode::SeededRandom;
  } else if (rc.init == "from_file") {
    mode = InitMode::FromFile;
  } else {
    throw ConfigError("init.mode must be minima_interpolation, seeded_random "
                      "or from_file");
  }
  Field u0 = init_field(*A.grid, mode, A.reg, A.sym, rc.seed, rc.init_path);

  FlowParams fp;
  fp.scale_c = A.scale_c;
  fp.dt = rc.dt;
  fp.k_sym = rc.k_sym;
  fp.k_log = rc.k_log;
  fp.tol_rate = rc.tol_rate;
  fp.max_steps = rc.max_steps;
  fp.M = rc.M;
  out.flow = run_flow(std::move(u0), A.W, A.sym, fp);

  out.report.energy_initial = out.flow.energy_trace.front().second;
  out.report.energy_final = out.flow.energy_trace.back().second;
  detail::analyze_field(out.flow.field, A, rc, out.report);
  out.summary = detail::make_summary(rc, A, &out.flow, out.report,
                                     A.grid->node_count());

  namespace fs = std::filesystem;
  fs::create_directories(rc.outdir);
  auto emit = [&](const std::string& name) {
    return (fs::path(rc.outdir) / name).string();
  };
  if (rc.out_csv) {
    std::string p = emit("field.csv");
    write_field_csv(out.flow.field, p);
    out.files.push_back(p);
  }
  if (rc.out_pgm) {
    std::string p = emit("deviation.pgm");
    write_pgm(out.flow.field, A.reg.a, p);
    out.files.push_back(p);
  }
  if (rc.out_ppm) {
    std::string p = emit("phase.ppm");
    write_ppm(out.flow.field, A.W, p);
    out.files.push_back(p);
  }
  if (rc.out_summary) {
    std::string p = emit("summary.txt");
    std::FILE* fp2 = std::fopen(p.c_str(), "w");
    if (!fp2) throw FileFormat("cannot open " + p + " for writing");
    std::fwrite(out.summary.data(), 1, out.summary.size(), fp2);
    std::fclose(fp2);
    out.files.push_back(p);
  }
  return out;
}

// Re-runs the analysis suite on a dumped field; no flow, no mutation.
inline SolveOutcome run_analyze(const RunConfig& rc,
                                const std::string& field_path) {
  SolveOutcome out;
  out.assembly = build_assembly(rc);
  Assembly& A = out.assembly;
  std::string path = field_path.empty()
                         ? (std::filesystem::path(rc.outdir) / "field.csv")
                               .string()
                         : field_path;
  Field u = read_field_csv(*A.grid, path);
  if (u.m != A.reg.f.target.dim)
    throw FileFormat(path + ": component count does not match the target");
  out.report.energy_initial = out.report.energy_final =
      energy(u, A.W, A.scale_c);
  detail::analyze_field(u, A, rc, out.report);
  out.summary =
      detail::make_summary(rc, A, nullptr, out.report, A.grid->node_count());
  out.flow.field = std::move(u);
  return out;
}

}  // namespace equiflow
