// Command-line surface for the yieldflow library: closed-form tables and
// curve sampling, the regularized finite-difference solver, and barrier
// verification of solved fields.  All outputs are plain CSV/JSON.
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "yieldflow/barriers.hpp"
#include "yieldflow/io.hpp"
#include "yieldflow/kernels.hpp"
#include "yieldflow/oned.hpp"
#include "yieldflow/profiles.hpp"
#include "yieldflow/roots.hpp"
#include "yieldflow/solver.hpp"
#include "yieldflow/verify.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace yieldflow;

double physical_to_dimensionless(double theta_deg, double mu_s) {
  if (!(theta_deg >= 0.0 && theta_deg < 90.0))
    throw std::domain_error("theta must lie in [0, 90) degrees");
  if (!(mu_s > 0.0)) throw std::domain_error("mu-s must be positive");
  return std::tan(theta_deg * std::numbers::pi / 180.0) / mu_s;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open for writing: " + p.string());
  return f;
}

// ---------------------------------------------------------------- table1 --

struct Table1Config {
  std::string out;
  double tol = 1e-8;
};

int cmd_table1(const Table1Config& cfg) {
  const std::vector<double> lams = {1.2, 1.4, 1.6, 1.8};
  std::vector<Lambda1Result> rows(lams.size());
  std::exception_ptr err;
  // Independent jobs; slots indexed by position keep the output ordered by
  // lambda no matter how the work is scheduled.
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(lams.size()); ++i) {
    try {
      rows[i] = optimize_lambda1(lams[i], cfg.tol);
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  std::ostringstream os;
  os << "lambda,lambda1_star,pi_star\n";
  for (std::size_t i = 0; i < lams.size(); ++i)
    os << io::g17(lams[i]) << ',' << io::g17(rows[i].lambda1) << ','
       << io::g17(rows[i].pi) << '\n';
  std::cout << os.str();
  if (!cfg.out.empty()) open_out(cfg.out) << os.str();
  return 0;
}

// --------------------------------------------------------------- profile --

struct ProfileConfig {
  std::vector<double> lambdas = {1.2, 1.4, 1.6, 1.8};
  int samples = 401;
  double sweep_min = 1.05, sweep_max = 5.0;
  int sweep_samples = 80;
  std::string out;
};

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

int cmd_profile(const ProfileConfig& cfg) {
  fs::create_directories(cfg.out);
  for (const double lam : cfg.lambdas) {
    const ProfileParams p = make_profile_params(lam);
    std::ofstream f = open_out(fs::path(cfg.out) /
                               ("profile_lambda" + short_num(lam) + ".csv"));
    f << "y,phi\n";
    for (int k = 0; k < cfg.samples; ++k) {
      const double y = -1.0 + 2.0 * k / (cfg.samples - 1);
      f << io::g17(y) << ',' << io::g17(profile_value(p, y)) << '\n';
    }
  }
  // Wall and center depths across a load sweep (the curve phi(1) vs lambda).
  std::ofstream f = open_out(fs::path(cfg.out) / "wall_depth.csv");
  f << "lambda,phi_wall,phi_center\n";
  for (int k = 0; k < cfg.sweep_samples; ++k) {
    const double lam = cfg.sweep_min + (cfg.sweep_max - cfg.sweep_min) * k /
                                           (cfg.sweep_samples - 1);
    const ProfileParams p = make_profile_params(lam);
    f << io::g17(lam) << ',' << io::g17(p.wall_depth) << ','
      << io::g17(p.center_depth) << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------ oned --

struct OnedConfig {
  double weight = 0.0, volume = 0.0;
  int samples = 1025;
  std::string out;
};

int cmd_oned(const OnedConfig& cfg) {
  const OneDSolution s = solve_oned(cfg.weight, cfg.volume);
  fs::create_directories(cfg.out);
  std::vector<double> w(cfg.samples);
  {
    std::ofstream f = open_out(fs::path(cfg.out) / "oned.csv");
    f << "y,w,q\n";
    for (int k = 0; k < cfg.samples; ++k) {
      const double y = -1.0 + 2.0 * k / (cfg.samples - 1);
      w[k] = profile_w(s, y);
      f << io::g17(y) << ',' << io::g17(w[k]) << ',' << io::g17(subgradient_q(s, y))
        << '\n';
    }
  }
  ordered_json j;
  j["weight"] = s.weight;
  j["volume"] = s.volume;
  j["multiplier"] = s.multiplier;
  j["plateau_halfwidth"] = s.plateau_halfwidth;
  j["plateau_height"] = s.plateau_height;
  j["energy"] = minimal_energy(s);
  j["quadrature_energy"] = energy_1d(w, s.weight);
  open_out(fs::path(cfg.out) / "oned.json") << j.dump(2) << '\n';
  std::cout << "multiplier " << io::g17(s.multiplier) << ", plateau halfwidth "
            << io::g17(s.plateau_halfwidth) << ", energy "
            << io::g17(minimal_energy(s)) << '\n';
  return 0;
}

// ---------------------------------------------------------- verification --

// Shared by `solve` (in-process) and `verify` (from dumped files) so the two
// reports are byte-identical for the same field.
ordered_json verification_json(const GridField& g, double lambda, double eps_min,
                               double threshold, double barrier_h,
                               double barrier_slack) {
  ordered_json j;
  j["lambda"] = lambda;
  if (!(lambda > 1.0)) {
    double mx = 0.0;
    for (double v : g.u) mx = std::max(mx, std::abs(v));
    j["subcritical"] = true;
    j["max_u"] = mx;
    j["zero_solution_ok"] = mx <= 5e-3;
    return j;
  }
  const BarrierPair bp(lambda);
  const double slack = sandwich_slack(g, eps_min);
  const SandwichReport sr = verify_sandwich(g, bp, slack);
  const SupportContour sc = extract_support(g, threshold);
  const ContourBandReport cb = check_contour_band(sc.points, bp, g.hy(), g.hz());
  const BarrierGridReport bg = check_barrier_inequalities(bp, barrier_h, barrier_slack);

  j["lambda1"] = bp.super().lambda1;
  j["lambda0"] = bp.lambda0();
  j["slack"] = slack;
  j["sandwich"] = {{"checked", sr.checked},
                   {"sub_violations", sr.sub_violations},
                   {"super_violations", sr.super_violations},
                   {"max_sub_gap", sr.max_sub_gap},
                   {"max_super_gap", sr.max_super_gap}};
  j["contour"] = {{"support_area", sc.area},
                  {"checked", cb.checked},
                  {"outside_band", cb.outside_band},
                  {"max_above_inner", cb.max_above_inner},
                  {"max_below_outer", cb.max_below_outer},
                  {"shallowest_z", cb.shallowest_z},
                  {"depth_ok", cb.depth_ok}};
  j["barrier_grid"] = {{"h", bg.h},
                       {"slack", bg.slack},
                       {"depth", bg.depth},
                       {"sub_checked", bg.sub_checked},
                       {"sub_violations", bg.sub_violations},
                       {"sub_skipped", bg.sub_skipped},
                       {"sub_max", bg.sub_max},
                       {"super_checked", bg.super_checked},
                       {"super_violations", bg.super_violations},
                       {"super_skipped", bg.super_skipped},
                       {"super_min", bg.super_min}};
  return j;
}

// ----------------------------------------------------------------- solve --

struct SolveConfig {
  SolveSpec spec;  // numeric defaults come from the library
  double lambda = std::nan("");
  double theta = std::nan("");
  double mu_s = std::nan("");
  std::string grid = "auto";
  std::string backend = "parallel";
  double barrier_h = 1.0 / 128.0;
  double barrier_slack = 1e-3;
  bool no_verify = false;
  std::string out;
};

double resolve_lambda(double lambda, double theta, double mu_s) {
  const bool have_l = !std::isnan(lambda);
  const bool have_t = !std::isnan(theta) || !std::isnan(mu_s);
  if (have_l == have_t)
    throw std::domain_error("give exactly one of --lambda or --theta with --mu-s");
  if (have_l) return lambda;
  if (std::isnan(theta) || std::isnan(mu_s))
    throw std::domain_error("--theta and --mu-s must be given together");
  return physical_to_dimensionless(theta, mu_s);
}

void parse_grid(const std::string& s, int& ny, int& nz) {
  if (s == "auto") return;  // keep defaults
  int a = 0, b = 0;
  char x = 0;
  std::istringstream is(s);
  if (!(is >> a >> x >> b) || (x != 'x' && x != 'X') || !(is >> std::ws).eof())
    throw std::domain_error("--grid expects NYxNZ or auto, got '" + s + "'");
  ny = a;
  nz = b;
}

int cmd_solve(const SolveConfig& cfg) {
  SolveSpec spec = cfg.spec;
  spec.lambda = resolve_lambda(cfg.lambda, cfg.theta, cfg.mu_s);
  parse_grid(cfg.grid, spec.ny, spec.nz);
  if (cfg.backend == "serial")
    spec.backend = kernels::Backend::serial;
  else if (cfg.backend == "parallel")
    spec.backend = kernels::Backend::parallel;
  else
    throw std::domain_error("--backend expects serial or parallel");

  const SolveResult res = solve(spec);
  const GridField& g = res.grid;
  const SolveReport& rep = res.report;

  fs::create_directories(cfg.out);
  const NodalFlux q = recover_flux(g, spec.eps_min);
  io::write_field_csv((fs::path(cfg.out) / "field.csv").string(), g, q);
  io::write_contour_csv((fs::path(cfg.out) / "contour.csv").string(), rep.contour,
                        rep.contour_offsets);
  io::write_report_json((fs::path(cfg.out) / "report.json").string(), rep, g);
  if (!cfg.no_verify) {
    const ordered_json vj =
        verification_json(g, spec.lambda, spec.eps_min, rep.support_threshold,
                          cfg.barrier_h, cfg.barrier_slack);
    open_out(fs::path(cfg.out) / "verify.json") << vj.dump(2) << '\n';
  }
  std::printf(
      "lambda=%g grid=%dx%d depth=%.4g iters=%d energy=%.8g el_residual=%.3g "
      "support_area=%.6g max_u=%.6g runtime=%.1fs\n",
      spec.lambda, g.ny, g.nz, g.depth, rep.iters, rep.energy, rep.el_residual,
      rep.support_area, rep.max_u, rep.runtime_s);
  return 0;
}

// ---------------------------------------------------------------- verify --

struct VerifyConfig {
  std::string in;
  std::string out;
  double barrier_h = 1.0 / 128.0;
  double barrier_slack = 1e-3;
};

int cmd_verify(const VerifyConfig& cfg) {
  const io::ReportFile rf = io::read_report_json((fs::path(cfg.in) / "report.json").string());
  const io::FieldFile ff = io::read_field_csv((fs::path(cfg.in) / "field.csv").string());
  if (ff.grid.ny != rf.ny || ff.grid.nz != rf.nz)
    throw std::runtime_error("field.csv and report.json disagree on the grid shape");
  const ordered_json vj =
      verification_json(ff.grid, rf.lambda, rf.eps_min, rf.support_threshold,
                        cfg.barrier_h, cfg.barrier_slack);
  const fs::path out_dir = cfg.out.empty() ? fs::path(cfg.in) : fs::path(cfg.out);
  fs::create_directories(out_dir);
  const fs::path out = out_dir / "verify.json";
  open_out(out) << vj.dump(2) << '\n';
  std::cout << "wrote " << out.string() << '\n';
  if (vj.contains("sandwich")) {
    const auto& s = vj["sandwich"];
    std::printf("sandwich: %lld checked, %lld sub / %lld super violations\n",
                s["checked"].get<long long>(), s["sub_violations"].get<long long>(),
                s["super_violations"].get<long long>());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  kernels::apply_thread_cap();
  CLI::App app{"Velocity field and yield curve of steady visco-plastic flow "
               "between walls: closed-form profiles and barriers, plus a "
               "regularized finite-difference minimizer."};
  app.require_subcommand(1);

  Table1Config t1;
  auto* s_t1 = app.add_subcommand(
      "table1", "Optimal auxiliary loads and support gaps for four reference loads");
  s_t1->add_option("--tol", t1.tol, "argument tolerance of the gap minimization");
  s_t1->add_option("--out", t1.out, "also write the CSV to this file");

  ProfileConfig pr;
  auto* s_pr = app.add_subcommand("profile", "Sample yield-curve profiles");
  s_pr->add_option("--lambda", pr.lambdas, "loads to sample (repeatable)");
  s_pr->add_option("--samples", pr.samples, "points per curve")
      ->check(CLI::Range(2, 1000000));
  s_pr->add_option("--sweep-min", pr.sweep_min, "smallest load of the depth sweep");
  s_pr->add_option("--sweep-max", pr.sweep_max, "largest load of the depth sweep");
  s_pr->add_option("--sweep-samples", pr.sweep_samples, "points in the depth sweep")
      ->check(CLI::Range(2, 1000000));
  s_pr->add_option("--out", pr.out, "output directory")->required();

  OnedConfig od;
  auto* s_od = app.add_subcommand("oned", "Closed-form 1D channel minimizer");
  s_od->add_option("--weight", od.weight, "coefficient of the |w'| term")->required();
  s_od->add_option("--volume", od.volume, "prescribed integral of the profile")
      ->required();
  s_od->add_option("--samples", od.samples, "points in the dump")
      ->check(CLI::Range(3, 10000000));
  s_od->add_option("--out", od.out, "output directory")->required();

  SolveConfig sv;
  auto* s_sv = app.add_subcommand("solve", "Minimize the regularized energy");
  s_sv->add_option("--lambda", sv.lambda, "dimensionless load");
  s_sv->add_option("--theta", sv.theta, "slope angle in degrees");
  s_sv->add_option("--mu-s", sv.mu_s, "internal friction coefficient");
  s_sv->add_option("--grid", sv.grid, "NYxNZ node counts, or auto (129x513)");
  s_sv->add_option("--depth", sv.spec.depth,
                   "truncation depth; 0 applies the automatic rule");
  s_sv->add_option("--eps0", sv.spec.eps0, "first regularization parameter");
  s_sv->add_option("--eps-min", sv.spec.eps_min, "final regularization parameter");
  s_sv->add_option("--eps-ratio", sv.spec.eps_ratio, "geometric schedule ratio");
  s_sv->add_option("--tol", sv.spec.tol, "Euler-Lagrange residual target");
  s_sv->add_option("--max-outer", sv.spec.max_outer, "fixed-point budget per stage");
  s_sv->add_option("--cg-tol", sv.spec.cg_tol, "inner CG residual floor");
  s_sv->add_option("--cg-max", sv.spec.cg_max, "inner CG iteration budget");
  s_sv->add_option("--inexact", sv.spec.inexact,
                   "inner target as a fraction of the outer residual");
  s_sv->add_option("--threshold-factor", sv.spec.threshold_factor,
                   "support threshold as a fraction of max u");
  s_sv->add_option("--backend", sv.backend, "serial or parallel kernels");
  s_sv->add_flag("!--no-nested", sv.spec.nested,
                 "disable the coarse-grid warm start");
  s_sv->add_option("--barrier-h", sv.barrier_h, "spacing of the barrier check grid");
  s_sv->add_option("--barrier-slack", sv.barrier_slack,
                   "slack of the barrier inequality check");
  s_sv->add_flag("--no-verify", sv.no_verify, "skip writing verify.json");
  s_sv->add_option("--out", sv.out, "output directory")->required();

  VerifyConfig vf;
  auto* s_vf = app.add_subcommand("verify", "Re-verify a dumped solve");
  s_vf->add_option("--in", vf.in, "directory holding field.csv and report.json")
      ->required();
  s_vf->add_option("--out", vf.out, "directory for verify.json (default: the input directory)");
  s_vf->add_option("--barrier-h", vf.barrier_h, "spacing of the barrier check grid");
  s_vf->add_option("--barrier-slack", vf.barrier_slack,
                   "slack of the barrier inequality check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (s_t1->parsed()) return cmd_table1(t1);
    if (s_pr->parsed()) return cmd_profile(pr);
    if (s_od->parsed()) return cmd_oned(od);
    if (s_sv->parsed()) return cmd_solve(sv);
    if (s_vf->parsed()) return cmd_verify(vf);
  } catch (const convergence_error& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
