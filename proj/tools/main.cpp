#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hncloak/fullsolve.hpp"
#include "hncloak/serialize.hpp"
#include "hncloak/shape_spec.hpp"

namespace fs = std::filesystem;
using namespace hncloak;

namespace {

struct GeometryArgs {
  std::string family = "disks";
  double r_i = 1.0, r_e = 2.0;
  double l = 1.0, xi_i = 0.5, xi_e = 1.0;
  int n = 1;
  std::string bg = "cos";
  std::string config_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "geometry JSON file (overrides inline parameters)");
    cmd->add_option("--family", family, "disks | ellipses")
        ->check(CLI::IsMember({"disks", "ellipses"}));
    cmd->add_option("--ri", r_i, "inner radius (disks)");
    cmd->add_option("--re", r_e, "outer radius (disks)");
    cmd->add_option("--l", l, "focal half-distance (ellipses)");
    cmd->add_option("--xii", xi_i, "inner elliptic radius");
    cmd->add_option("--xie", xi_e, "outer elliptic radius");
    cmd->add_option("--n", n, "background mode index");
    cmd->add_option("--bg", bg, "background type: cos | sin")
        ->check(CLI::IsMember({"cos", "sin"}));
  }

  CloakConfig config() const {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ParamError("cannot read " + config_path);
      json j;
      is >> j;
      CloakConfig cfg = config_from_json(j);
      cfg.zeta0 = 0.0;  // commands pick the cloaking value or an override
      return cfg;
    }
    const TrigMode mode = (bg == "cos") ? TrigMode::cos : TrigMode::sin;
    if (family == "disks") return CloakConfig::disks(r_i, r_e, n, mode);
    return CloakConfig::ellipses(l, xi_i, xi_e, n, mode);
  }
};

struct GlobalArgs {
  std::string out = ".";
  int nodes = 256;
  bool json_out = false;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw ParamError("cannot write " + path.string());
  os << content;
}

void emit(const GlobalArgs& ga, const json& j, const std::string& plain) {
  if (ga.json_out)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << plain << "\n";
}

std::string field_grid_csv(const FieldSolution& sol, double half_width, int cells) {
  std::ostringstream os;
  os.precision(12);
  os << "x,y,phi,p,p_scatter,u1,u2\n";
  const double h = 2.0 * half_width / cells;
  for (int iy = 0; iy < cells; ++iy) {
    for (int ix = 0; ix < cells; ++ix) {
      const Vec2 x{-half_width + (ix + 0.5) * h, -half_width + (iy + 0.5) * h};
      if (sol.region(x) == FieldSolution::Region::core) continue;
      if (sol.inner_curve().distance(x) < 0.02 || sol.outer_curve().distance(x) < 0.02) continue;
      const Vec2 u = velocity_field(sol, x);
      os << x.x << "," << x.y << "," << sol.phi(x) << "," << sol.pressure(x) << ","
         << sol.scattered(x) << "," << u.x << "," << u.y << "\n";
    }
  }
  return os.str();
}

std::string trace_csv(const std::vector<TraceSample>& tr) {
  std::ostringstream os;
  os.precision(12);
  os << "arc,value\n";
  for (const TraceSample& s : tr) os << s.arc << "," << s.value << "\n";
  return os.str();
}

int cmd_zeta(const GeometryArgs& geo, const GlobalArgs& ga) {
  const double z = perfect_zeta(geo.config());
  json j = to_json(with_perfect_zeta(geo.config()));
  j["schema"] = schema_version;
  std::ostringstream plain;
  plain.precision(6);
  plain << std::fixed << z;
  emit(ga, j, plain.str());
  return 0;
}

int cmd_design(const GeometryArgs& geo, const GlobalArgs& ga, const std::string& fspec,
               bool skip_verify) {
  const CloakConfig cfg = with_perfect_zeta(geo.config());
  const FourierShape f = parse_shape_spec(fspec);
  const DesignResult res = design_for(cfg, f);
  json j = to_json(res);
  j["f"] = to_json(f);
  bool pass = true;
  if (!skip_verify) {
    const VerifyReport rep = verify_design(cfg, f, res.g, std::min(ga.nodes, 192));
    j["verify"] = to_json(rep);
    pass = rep.pass();
  }
  std::ostringstream plain;
  plain.precision(6);
  plain << "g = " << format_shape(res.g);
  if (!skip_verify) plain << (pass ? "  [verified]" : "  [verification FAILED]");
  emit(ga, j, plain.str());
  write_file(fs::path(ga.out) / "design.json", j.dump(2));
  return pass ? 0 : 1;
}

struct SolveArgs {
  std::string fspec = "0", gspec;
  bool design_g = false;
  double epsilon = 0.1;
  double zeta0 = 0.0;
  bool zeta_given = false;
};

std::shared_ptr<FieldSolution> run_solve(const GeometryArgs& geo, const GlobalArgs& ga,
                                         const SolveArgs& sa, CloakConfig* out_cfg = nullptr) {
  CloakConfig cfg = geo.config();
  cfg.zeta0 = sa.zeta_given ? sa.zeta0 : perfect_zeta(cfg);
  const FourierShape f = parse_shape_spec(sa.fspec);
  FourierShape g;
  if (sa.design_g)
    g = design_for(with_perfect_zeta(geo.config()), f).g;
  else if (!sa.gspec.empty())
    g = parse_shape_spec(sa.gspec);
  if (out_cfg) *out_cfg = cfg;
  return solve_perturbed(PerturbedProblem(cfg, f, g, sa.epsilon), ga.nodes);
}

int cmd_solve(const GeometryArgs& geo, const GlobalArgs& ga, const SolveArgs& sa,
              double grid_half_width, int grid_cells) {
  CloakConfig cfg;
  const auto sol = run_solve(geo, ga, sa, &cfg);
  const fs::path csv = fs::path(ga.out) / "field.csv";
  write_file(csv, field_grid_csv(*sol, grid_half_width, grid_cells));
  json j{{"schema", schema_version},
         {"config", to_json(cfg)},
         {"epsilon", sa.epsilon},
         {"nodes", ga.nodes},
         {"field_csv", csv.string()}};
  emit(ga, j, "field grid written to " + csv.string());
  return 0;
}

int cmd_trace(const GeometryArgs& geo, const GlobalArgs& ga, const SolveArgs& sa, double radius,
              int samples) {
  const auto sol = run_solve(geo, ga, sa);
  const std::vector<TraceSample> tr = scattered_trace(*sol, radius, samples);
  double mx = 0.0;
  for (const TraceSample& s : tr) mx = std::max(mx, std::abs(s.value));
  const fs::path csv = fs::path(ga.out) / "trace.csv";
  write_file(csv, trace_csv(tr));
  json j{{"schema", schema_version},
         {"radius", radius},
         {"samples", samples},
         {"max_abs", mx},
         {"trace_csv", csv.string()}};
  std::ostringstream plain;
  plain << "max |p - P| on radius " << radius << ": " << mx;
  emit(ga, j, plain.str());
  return 0;
}

int cmd_q(const GeometryArgs& geo, const GlobalArgs& ga, const SolveArgs& sa, double half_width,
          bool refine_check) {
  const auto sol = run_solve(geo, ga, sa);
  const QResult q = evaluate_Q(*sol, QRegion{half_width, 0.0});
  json j = to_json(q);
  j["epsilon"] = sa.epsilon;
  j["N"] = ga.nodes;
  j["half_width"] = half_width;
  if (refine_check) {
    const QResult qf = evaluate_Q(*sol, QRegion{half_width, half_width / 400.0});
    j["Q_refined"] = qf.Q;
    j["refinement_rel_change"] = std::abs(qf.Q - q.Q) / std::max(qf.Q, 1e-300);
  }
  std::ostringstream plain;
  plain << "Q = " << q.Q;
  emit(ga, j, plain.str());
  return 0;
}

int cmd_report(const GeometryArgs& geo, const GlobalArgs& ga, const std::string& fspec,
               double epsilon, double radius) {
  const CloakConfig cfg = with_perfect_zeta(geo.config());
  const FourierShape f = parse_shape_spec(fspec);
  const FourierShape g = design_for(cfg, f).g;

  struct Case {
    const char* name;
    FourierShape f, g;
    double eps;
  };
  const Case cases[] = {{"perfect", FourierShape(), FourierShape(), 0.0},
                        {"1-order", f, FourierShape(), epsilon},
                        {"2-order", f, g, epsilon}};
  json rows = json::array();
  double qvals[3] = {0, 0, 0};
  int idx = 0;
  for (const Case& c : cases) {
    const auto sol = solve_perturbed(PerturbedProblem(cfg, c.f, c.g, c.eps), ga.nodes);
    const QResult q = evaluate_Q(*sol, QRegion{});
    const std::vector<TraceSample> tr = scattered_trace(*sol, radius, 256);
    const fs::path csv = fs::path(ga.out) / (std::string("trace_") + c.name + ".csv");
    write_file(csv, trace_csv(tr));
    double mx = 0.0;
    for (const TraceSample& s : tr) mx = std::max(mx, std::abs(s.value));
    rows.push_back(json{{"case", c.name},
                        {"Q", q.Q},
                        {"excluded_area", q.excluded_area},
                        {"trace_max", mx},
                        {"trace_csv", csv.string()}});
    qvals[idx++] = q.Q;
  }
  // a zero perturbation makes all three cases coincide; both residuals then
  // sit at the perfect-cloak noise floor and the strict ordering is waived
  const bool ordered =
      qvals[0] < 1e-5 && (qvals[2] < qvals[1] || (qvals[1] < 1e-6 && qvals[2] < 1e-6));
  json j{{"schema", schema_version}, {"config", to_json(cfg)}, {"epsilon", epsilon},
         {"g", to_json(g)},          {"cases", rows},          {"ordering_ok", ordered}};
  write_file(fs::path(ga.out) / "report.json", j.dump(2));
  std::ostringstream plain;
  plain << "Q(perfect) = " << qvals[0] << "  Q(1-order) = " << qvals[1]
        << "  Q(2-order) = " << qvals[2] << (ordered ? "  [ok]" : "  [ordering FAILED]");
  emit(ga, j, plain.str());
  return ordered ? 0 : 1;
}

int cmd_validate(const GeometryArgs& geo, const GlobalArgs& ga, const std::string& fspec,
                 const std::string& gspec) {
  const CloakConfig cfg = with_perfect_zeta(geo.config());
  const FourierShape f = parse_shape_spec(fspec);
  const FourierShape g = gspec.empty() ? design_for(cfg, f).g : parse_shape_spec(gspec);
  const VerifyReport rep = verify_design(cfg, f, g, std::min(ga.nodes, 192));
  json j = to_json(rep);
  j["g"] = to_json(g);
  std::ostringstream plain;
  plain << "max |M| = " << rep.max_abs_M << ", generic ring norm = " << rep.generic_norm
        << " (baseline " << rep.baseline_norm << ") -> " << (rep.pass() ? "pass" : "FAIL");
  emit(ga, j, plain.str());
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"enhanced hydrodynamic near-cloak design for electro-osmotic Hele-Shaw flow"};
  app.require_subcommand(1);
  app.fallthrough(true);

  GlobalArgs ga;
  app.add_option("--out", ga.out, "output directory for data artifacts");
  app.add_option("--nodes", ga.nodes, "quadrature nodes per curve");
  app.add_flag("--json", ga.json_out, "print JSON to stdout");

  GeometryArgs geo_zeta, geo_design, geo_solve, geo_trace, geo_q, geo_report, geo_validate;
  SolveArgs sa_solve, sa_trace, sa_q;
  std::string f_design = "0", f_report = "-cos4", f_validate = "0", g_validate;
  bool skip_verify = false;
  double grid_half_width = 3.0, trace_radius = 3.0, q_half_width = 3.0, report_eps = 0.1;
  double report_radius = 3.0;
  int grid_cells = 160, trace_samples = 256;
  bool q_refine = false;

  CLI::App* zeta = app.add_subcommand("zeta", "cloaking zeta potential for a geometry");
  geo_zeta.attach(zeta);

  CLI::App* design = app.add_subcommand("design", "construct the outer shape from the inner one");
  geo_design.attach(design);
  design->add_option("--f", f_design, "inner shape spec, e.g. \"-cos4\"")->required();
  design->add_flag("--skip-verify", skip_verify, "skip the verification solve");

  auto attach_solveargs = [](CLI::App* cmd, GeometryArgs& geo, SolveArgs& sa) {
    geo.attach(cmd);
    cmd->add_option("--f", sa.fspec, "inner shape spec");
    cmd->add_option("--g", sa.gspec, "outer shape spec");
    cmd->add_flag("--design-g", sa.design_g, "derive g from f by the recursion");
    cmd->add_option("--epsilon", sa.epsilon, "perturbation amplitude");
    cmd->add_option("--zeta0", sa.zeta0, "override the zeta potential")
        ->each([&sa](const std::string&) { sa.zeta_given = true; });
  };

  CLI::App* solve = app.add_subcommand("solve", "solve the perturbed problem, export a field grid");
  attach_solveargs(solve, geo_solve, sa_solve);
  solve->add_option("--grid-half-width", grid_half_width, "field grid half-width");
  solve->add_option("--grid-cells", grid_cells, "cells per side");

  CLI::App* trace = app.add_subcommand("trace", "scattered pressure on an enclosing circle");
  attach_solveargs(trace, geo_trace, sa_trace);
  trace->add_option("--radius", trace_radius, "trace circle radius");
  trace->add_option("--samples", trace_samples, "number of samples");

  CLI::App* q = app.add_subcommand("q", "evaluation functional over the square minus the cloak");
  attach_solveargs(q, geo_q, sa_q);
  q->add_option("--half-width", q_half_width, "integration square half-width");
  q->add_flag("--refine-check", q_refine, "re-evaluate on a refined grid");

  CLI::App* report = app.add_subcommand("report", "Q table and traces for perfect/1-order/2-order");
  geo_report.attach(report);
  report->add_option("--f", f_report, "inner shape spec");
  report->add_option("--epsilon", report_eps, "perturbation amplitude");
  report->add_option("--radius", report_radius, "trace circle radius");

  CLI::App* validate = app.add_subcommand("validate", "verify a design against both solvers");
  geo_validate.attach(validate);
  validate->add_option("--f", f_validate, "inner shape spec")->required();
  validate->add_option("--g", g_validate, "outer shape spec (default: designed from f)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
  }

  try {
    fs::create_directories(ga.out);
    if (zeta->parsed()) return cmd_zeta(geo_zeta, ga);
    if (design->parsed()) return cmd_design(geo_design, ga, f_design, skip_verify);
    if (solve->parsed()) return cmd_solve(geo_solve, ga, sa_solve, grid_half_width, grid_cells);
    if (trace->parsed()) return cmd_trace(geo_trace, ga, sa_trace, trace_radius, trace_samples);
    if (q->parsed()) return cmd_q(geo_q, ga, sa_q, q_half_width, q_refine);
    if (report->parsed()) return cmd_report(geo_report, ga, f_report, report_eps, report_radius);
    if (validate->parsed()) return cmd_validate(geo_validate, ga, f_validate, g_validate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
