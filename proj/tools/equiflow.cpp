// CLI driver: catalog inspection, positivity certificates, solve runs, and
// standalone analysis of dumped fields.
//
// Exit codes: 0 pass, 1 check failure (negative verdict, threshold miss,
// solver divergence), 2 usage or configuration error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "equiflow/analysis.hpp"
#include "equiflow/config.hpp"
#include "equiflow/errors.hpp"
#include "equiflow/group_catalog.hpp"
#include "equiflow/hom_catalog.hpp"
#include "equiflow/homomorphism.hpp"
#include "equiflow/pipeline.hpp"

namespace {

using namespace equiflow;

struct HomSpec {
  const char* name;
  HomParams params;
};

std::vector<HomSpec> catalog_entries() {
  std::vector<HomSpec> out;
  HomParams p;
  p.group = "Dn";
  p.group_params.n = 3;
  out.push_back({"identity", p});
  out.push_back({"f_D6_D3", {}});
  out.push_back({"fprime", {}});
  out.push_back({"phi", {}});
  out.push_back({"psi", {}});
  out.push_back({"psiprime", {}});
  HomParams fm;
  fm.n = 3;
  fm.k = 2;
  fm.m = 1;
  out.push_back({"f_m", fm});
  HomParams g2k;
  g2k.k = 2;
  out.push_back({"g_2k", g2k});
  out.push_back({"epsilon", {}});
  out.push_back({"h_2k", g2k});
  out.push_back({"fdoubleprime", {}});
  out.push_back({"p_canonical", {}});
  out.push_back({"footnote_negative", {}});
  return out;
}

int cmd_catalog() {
  std::printf("groups:\n");
  const char* groups[] = {"Dn", "tetra", "cube", "Gprime", "Kprime", "H",
                          "interval_lattice"};
  for (const char* gname : groups) {
    CatalogParams gp;
    gp.n = 3;
    gp.d = 1.0;
    ReflectionGroup G = catalog_group(gname, gp);
    if (G.kind == GroupKind::Finite)
      std::printf("  %s: finite, order %d, dim %d\n", gname, G.order(), G.dim);
    else
      std::printf("  %s: discrete, point group order %d, dim %d, lattice rank %d\n",
                  gname, int(G.elements.size()), G.dim, int(G.lattice.size()));
  }
  std::printf("homomorphisms:\n");
  for (const HomSpec& spec : catalog_entries()) {
    try {
      Homomorphism f = catalog_homomorphism(spec.name, spec.params);
      PositivityResult r = is_positive(f);
      std::string extra;
      if (r.positive)
        extra = "chambers: " + std::to_string(r.all_certificates.size());
      if (!f.lattice_acts_trivially())
        extra += std::string(extra.empty() ? "" : "; ") +
                 "translations act nontrivially: no equivariant periodic "
                 "field exists";
      std::printf("  %s:%s  (%s -> %s%s%s)\n", spec.name,
                  r.positive ? "positive" : "negative", f.source.name.c_str(),
                  f.target.name.c_str(), extra.empty() ? "" : "; ",
                  extra.c_str());
    } catch (const Error& e) {
      std::printf("  %s:error %s\n", spec.name, e.what());
    }
  }
  return 0;
}

void print_certificate(const Homomorphism& f, const PositivityResult& r) {
  const PositivityCertificate& c = r.certificate;
  std::printf("chamber element index: %d\n", c.chamber_element);
  for (size_t i = 0; i < c.wall_assignment.size(); ++i) {
    std::printf("  generator %d -> walls {", int(i));
    if (c.wall_assignment[i].empty()) {
      std::printf("} (whole space: image fixes everything it needs)\n");
      continue;
    }
    for (size_t j = 0; j < c.wall_assignment[i].size(); ++j)
      std::printf("%s%d", j ? "," : "", c.wall_assignment[i][j]);
    std::printf("}\n");
  }
  std::printf("positive chambers: %d of %d\n", int(r.all_certificates.size()),
              f.target.order());
}

int cmd_check_hom(const std::string& name, const HomParams& params) {
  Homomorphism f = catalog_homomorphism(name, params);
  std::printf("homomorphism %s: %s -> %s\n", name.c_str(),
              f.source.name.c_str(), f.target.name.c_str());
  if (!f.lattice_acts_trivially()) {
    std::printf("verdict: positive by the wall criterion, but lattice "
                "translations map to a nontrivial isometry;\n"
                "no nonconstant equivariant periodic field exists.\n");
    PositivityResult r = is_positive(f);
    if (r.positive) print_certificate(f, r);
    return 1;
  }
  PositivityResult r = is_positive(f);
  if (r.positive) {
    std::printf("verdict: positive\n");
    print_certificate(f, r);
    return 0;
  }
  std::printf("verdict: negative\n");
  for (const auto& fail : r.failures) {
    std::printf("  chamber %d, generator %d: no wall subset matches the fixed "
                "space of the image\n",
                fail.first, fail.second);
  }
  return 1;
}

int cmd_solve(const std::string& config_path) {
  Config c = parse_config_file(config_path);
  RunConfig rc = load_run_config(c);
  SolveOutcome out = run_solve(rc);
  std::fputs(out.summary.c_str(), stdout);
  for (const std::string& fpath : out.files)
    std::printf("wrote: %s\n", fpath.c_str());
  return out.report.checks_passed ? 0 : 1;
}

int cmd_analyze(const std::string& config_path, const std::string& field) {
  Config c = parse_config_file(config_path);
  RunConfig rc = load_run_config(c);
  SolveOutcome out = run_analyze(rc, field);
  std::fputs(out.summary.c_str(), stdout);
  return out.report.checks_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant Allen-Cahn gradient flow toolkit"};
  app.require_subcommand(1);

  app.add_subcommand("catalog",
                     "list groups and homomorphisms with positivity verdicts");

  auto* check = app.add_subcommand("check-hom",
                                   "verify positivity of one homomorphism");
  std::string hom_name;
  HomParams hp;
  hp.group_params.n = 3;
  check->add_option("name", hom_name, "catalog name")->required();
  check->add_option("--n", hp.n, "parameter n (f_m)");
  check->add_option("--k", hp.k, "parameter k (f_m, g_2k, h_2k)");
  check->add_option("--m", hp.m, "parameter m = +/-1 (f_m)");
  check->add_option("--group", hp.group, "source group (identity, epsilon)");
  check->add_option("--group-n", hp.group_params.n, "group parameter n");
  check->add_option("--group-d", hp.group_params.d, "group parameter d");

  auto* solve = app.add_subcommand("solve", "run the gradient flow pipeline");
  std::string solve_cfg;
  solve->add_option("config", solve_cfg, "config file")->required();

  auto* analyze = app.add_subcommand("analyze",
                                     "re-run analysis on a dumped field");
  std::string analyze_cfg, analyze_field;
  analyze->add_option("config", analyze_cfg, "config file")->required();
  analyze->add_option("--field", analyze_field,
                      "field CSV (default: output.dir/field.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("catalog")) return cmd_catalog();
    if (app.got_subcommand("check-hom")) return cmd_check_hom(hom_name, hp);
    if (app.got_subcommand("solve")) return cmd_solve(solve_cfg);
    if (app.got_subcommand("analyze"))
      return cmd_analyze(analyze_cfg, analyze_field);
  } catch (const UnknownCatalogName& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const BadParams& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
