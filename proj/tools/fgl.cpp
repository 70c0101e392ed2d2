// Command-line front end: certification, single solves, limit sweeps, and the
// derived checks, each emitting deterministic JSON/CSV/SVG artifacts.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fgl/report.hpp"

namespace {

using nlohmann::ordered_json;

struct GridArgs {
  std::string domain = "interval:-1,1";
  int n = 201;
  double s = 0.5;
  double R = 4.0;
};

void add_grid_args(CLI::App* cmd, GridArgs& a) {
  cmd->add_option("--domain", a.domain, "domain spec: interval:a,b | box:ax,bx,ay,by | disk:r")
      ->capture_default_str();
  cmd->add_option("--n", a.n, "interior cells along the first axis (>= 8)")
      ->capture_default_str();
  cmd->add_option("--s", a.s, "fractional order, in (0,1)")->capture_default_str();
  cmd->add_option("--R", a.R, "interaction truncation radius (>= 2 diam)")
      ->capture_default_str();
}

fgl::Grid make_grid(const GridArgs& a) {
  return fgl::build_grid(fgl::parse_domain(a.domain), a.n, a.s, a.R);
}

struct SolverArgs {
  int max_iters = 500;
  double grad_tol = 0.0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  double reg = 0.0;
  std::string init = "oracle";
};

void add_solver_args(CLI::App* cmd, SolverArgs& a) {
  cmd->add_option("--max-iters", a.max_iters, "Newton iteration cap")->capture_default_str();
  cmd->add_option("--grad-tol", a.grad_tol,
                  "gradient sup-norm target; <= 0 selects 1e-8 x mean cell measure")
      ->capture_default_str();
  cmd->add_option("--backtrack", a.backtrack, "line-search shrink factor")->capture_default_str();
  cmd->add_option("--armijo", a.armijo, "sufficient-decrease constant")->capture_default_str();
  cmd->add_option("--regularization", a.reg, "initial curvature damping")->capture_default_str();
  cmd->add_option("--init", a.init, "initial guess: zero | oracle")
      ->check(CLI::IsMember({"zero", "oracle"}))
      ->capture_default_str();
}

fgl::SolverConfig to_config(const SolverArgs& a) {
  fgl::SolverConfig c;
  c.max_iters = a.max_iters;
  c.grad_tol = a.grad_tol;
  c.backtrack_factor = a.backtrack;
  c.armijo_c = a.armijo;
  c.newton_regularization = a.reg;
  c.initial_guess =
      a.init == "zero" ? fgl::InitialGuess::Zero : fgl::InitialGuess::DistOracleScaled;
  return c;
}

ordered_json solver_echo(const SolverArgs& a) {
  ordered_json j;
  j["max_iters"] = a.max_iters;
  j["grad_tol"] = a.grad_tol;
  j["backtrack_factor"] = a.backtrack;
  j["armijo_c"] = a.armijo;
  j["newton_regularization"] = a.reg;
  j["initial_guess"] = a.init;
  return j;
}

struct SeqArgs {
  std::string kind = "power";
  std::string exponents = "4,8,16,32,64";
  double beta = 0.0;  // 0 = kind-specific default
};

void add_seq_args(CLI::App* cmd, SeqArgs& a) {
  cmd->add_option("--family-kind", a.kind, "sequence kind: power | sumpow | powerlog")
      ->check(CLI::IsMember({"power", "sumpow", "powerlog"}))
      ->capture_default_str();
  cmd->add_option("--exponents", a.exponents, "comma-separated strictly increasing list")
      ->capture_default_str();
  cmd->add_option("--beta", a.beta,
                  "upper/lower exponent ratio bound (sumpow: upper = beta x lower; default 1.5)")
      ->capture_default_str();
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad number in list: " + tok);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty exponent list");
  return out;
}

fgl::FamilySequence to_sequence(const SeqArgs& a) {
  const std::vector<double> ps = parse_double_list(a.exponents);
  std::vector<fgl::OrliczFamily> fams;
  double beta = a.beta;
  if (a.kind == "power") {
    for (double p : ps) fams.push_back(fgl::OrliczFamily::power_law(p));
    if (beta <= 0.0) beta = 1.0;
  } else if (a.kind == "sumpow") {
    if (beta <= 0.0) beta = 1.5;
    for (double p : ps) fams.push_back(fgl::OrliczFamily::sum_of_powers(p, beta * p));
  } else {
    for (double p : ps) fams.push_back(fgl::OrliczFamily::power_log(p));
    if (beta <= 0.0) beta = (ps.front() + 1.0) / ps.front();
  }
  return fgl::make_family_sequence(std::move(fams), beta);
}

// f specs: "const:v", "bump:amp,cx[,cy],width" (';'-separated sum), or
// "csv:path" with one value per interior node per line
fgl::GridFunction parse_f_spec(const fgl::Grid& grid, const std::string& spec) {
  fgl::GridFunction f = fgl::zero_function(grid);
  if (spec.rfind("const:", 0) == 0) {
    const double v = std::stod(spec.substr(6));
    for (int i : grid.interior) f.values[i] = v;
    return f;
  }
  if (spec.rfind("bump:", 0) == 0) {
    std::stringstream ss(spec.substr(5));
    std::string part;
    while (std::getline(ss, part, ';')) {
      const std::vector<double> v = parse_double_list(part);
      double amp, cx, cy = 0.0, w;
      if (grid.dimension == 1 && v.size() == 3) {
        amp = v[0]; cx = v[1]; w = v[2];
      } else if (grid.dimension == 2 && v.size() == 4) {
        amp = v[0]; cx = v[1]; cy = v[2]; w = v[3];
      } else {
        throw std::invalid_argument("bump spec needs amp,cx[,cy],width");
      }
      if (!(w > 0.0)) throw std::invalid_argument("bump width must be positive");
      for (int i : grid.interior) {
        const double dx = grid.nodes[i][0] - cx, dy = grid.nodes[i][1] - cy;
        const double r2 = (dx * dx + dy * dy) / (w * w);
        if (r2 < 1.0) f.values[i] += amp * (1.0 - r2) * (1.0 - r2);
      }
    }
    return f;
  }
  if (spec.rfind("csv:", 0) == 0) {
    std::ifstream in(spec.substr(4));
    if (!in) throw std::invalid_argument("cannot read f values from " + spec.substr(4));
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      vals.push_back(std::stod(line));
    }
    if ((int)vals.size() != grid.n_interior())
      throw std::invalid_argument("f csv has " + std::to_string(vals.size()) +
                                  " values, grid has " + std::to_string(grid.n_interior()) +
                                  " interior nodes");
    return fgl::make_zero_extended(grid, vals);
  }
  throw std::invalid_argument("unknown f spec: " + spec);
}

void ensure_outdir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

int run_certify(const std::string& family_spec, int samples, double tol, double s_opt,
                const std::string& outdir) {
  const fgl::OrliczFamily fam = fgl::parse_family(family_spec);
  const std::vector<double> grid = fgl::log_uniform_samples(1e-6, 1e6, samples);
  const fgl::CertReport rep = fgl::certify_growth(fam, grid, tol);
  std::printf("family %s: p-=%g p+=%g beta=%g\n", fam.spec_string().c_str(), rep.p_minus,
              rep.p_plus, rep.beta);
  for (const auto& c : rep.checks)
    std::printf("  [%s] %-28s worst_slack=%.3e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.worst_slack);
  if (s_opt > 0.0 && !fgl::pointwise_well_defined(fam, s_opt))
    std::printf(
        "warning: pointwise operator values at s=%g may not stabilize under refinement "
        "(needs p- >= 2 or p- > 1/(1-s))\n",
        s_opt);
  if (!outdir.empty()) {
    ensure_outdir(outdir);
    ordered_json echo;
    echo["command"] = "certify-family";
    echo["family"] = family_spec;
    echo["samples"] = samples;
    echo["rel_tol"] = tol;
    fgl::write_text_file(outdir + "/certify_report.json",
                         fgl::cert_report_json(fam, rep, echo).dump(2) + "\n");
  }
  std::printf("%s\n", rep.all_pass() ? "all inequalities hold" : "certification FAILED");
  return rep.all_pass() ? 0 : 1;
}

int run_solve(const GridArgs& ga, const SolverArgs& sa, const std::string& family_spec,
              const std::string& f_spec, const std::string& outdir) {
  const fgl::Grid grid = make_grid(ga);
  const fgl::OrliczFamily fam = fgl::parse_family(family_spec);
  const fgl::GridFunction f = parse_f_spec(grid, f_spec);
  const fgl::SolveResult res = fgl::solve(fam, f, grid, to_config(sa));

  ordered_json echo;
  echo["command"] = "solve";
  echo["domain"] = ga.domain;
  echo["n"] = ga.n;
  echo["s"] = ga.s;
  echo["R"] = ga.R;
  echo["family"] = family_spec;
  echo["f"] = f_spec;
  echo["solver"] = solver_echo(sa);

  std::printf("solve %s on %s: energy=%.17g grad_norm=%.3e iterations=%d converged=%s\n",
              family_spec.c_str(), ga.domain.c_str(), res.energy, res.grad_norm,
              res.iterations, res.converged ? "yes" : "no");
  ensure_outdir(outdir);
  ordered_json j = fgl::report_envelope(echo);
  j["energy"] = res.energy;
  j["grad_norm"] = res.grad_norm;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  fgl::write_text_file(outdir + "/solve.json", j.dump(2) + "\n");
  fgl::write_text_file(outdir + "/solution.csv", fgl::solution_csv(res.u, echo));
  if (!res.converged) std::printf("FAIL: solver did not reach the gradient target\n");
  return res.converged ? 0 : 1;
}

ordered_json experiment_echo(const char* command, const GridArgs& ga, const SeqArgs& qa,
                             const SolverArgs& sa, const std::string& f_spec, int trials,
                             std::uint64_t seed) {
  ordered_json echo;
  echo["command"] = command;
  echo["domain"] = ga.domain;
  echo["n"] = ga.n;
  echo["s"] = ga.s;
  echo["R"] = ga.R;
  echo["family_kind"] = qa.kind;
  echo["exponents"] = qa.exponents;
  echo["beta"] = qa.beta;
  echo["f"] = f_spec;
  echo["solver"] = solver_echo(sa);
  echo["trials"] = trials;
  echo["seed"] = seed;
  return echo;
}

int run_limit(const GridArgs& ga, const SeqArgs& qa, const SolverArgs& sa,
              const std::string& f_spec, int trials, std::uint64_t seed,
              const std::string& outdir) {
  const fgl::Grid grid = make_grid(ga);
  const fgl::FamilySequence seq = to_sequence(qa);
  const fgl::GridFunction f = parse_f_spec(grid, f_spec);
  const fgl::ExperimentReport rep =
      fgl::run_limit_experiment(seq, f, grid, to_config(sa), trials, seed);

  const ordered_json echo = experiment_echo("limit-experiment", ga, qa, sa, f_spec, trials, seed);
  ensure_outdir(outdir);
  fgl::write_text_file(outdir + "/report.json",
                       fgl::experiment_report_json(rep, echo).dump(2) + "\n");
  fgl::write_text_file(outdir + "/report.csv", fgl::experiment_report_csv(rep, echo));
  fgl::write_text_file(outdir + "/sup_error.svg", fgl::sup_error_svg(rep, echo));
  for (const auto& row : rep.rows)
    fgl::write_text_file(outdir + "/solution_p" + fgl::format_g(row.p_minus) + ".csv",
                         fgl::solution_csv(row.u, echo));

  bool pass = true;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    std::printf("p-=%-6g sup_error=%.5f seminorm=%.5f bound=%.5f energy=%.6g iters=%d%s\n",
                r.p_minus, r.sup_error_vs_oracle, r.seminorm_sG, r.apriori_bound, r.energy,
                r.iterations, r.converged ? "" : "  NOT CONVERGED");
    if (!r.converged) {
      std::printf("FAIL: solve did not converge at p-=%g\n", r.p_minus);
      pass = false;
    }
    if (r.seminorm_sG > r.apriori_bound * (1.0 + 1e-9)) {
      std::printf("FAIL: seminorm exceeds the explicit bound at p-=%g\n", r.p_minus);
      pass = false;
    }
    // the sup error is not monotone pair by pair: the discrete solution can
    // cross the oracle profile at intermediate exponents, so only the
    // end-to-end decrease is enforced below
    if (k > 0 && r.sup_error_vs_oracle > rep.rows[k - 1].sup_error_vs_oracle + 1e-12)
      std::printf("note: sup error increased between p-=%g and p-=%g\n",
                  rep.rows[k - 1].p_minus, r.p_minus);
  }
  if (rep.rows.size() > 1 &&
      rep.rows.back().sup_error_vs_oracle >= rep.rows.front().sup_error_vs_oracle) {
    std::printf("FAIL: sup error did not decrease across the sweep\n");
    pass = false;
  }
  const auto& d = rep.diagnostics;
  std::printf("limit diagnostics: holder=%.4f maxL+=%.4f minL-=%.4f maximization_gap=%.3e\n",
              d.holder_s_constant_of_limit, d.L_plus_max, d.L_minus_min, d.maximization_gap);
  if (std::isfinite(d.maximization_gap) && d.maximization_gap > 1e-9) {
    std::printf("FAIL: a trial profile beat the candidate in the maximization check\n");
    pass = false;
  }
  std::printf("%s\n", pass ? "limit experiment checks hold" : "limit experiment FAILED");
  return pass ? 0 : 1;
}

int run_gamma(const GridArgs& ga, const SeqArgs& qa, const std::string& outdir) {
  const fgl::Grid grid = make_grid(ga);
  const fgl::FamilySequence seq = to_sequence(qa);
  const std::vector<double> energies =
      fgl::gamma_recovery_check(seq, fgl::dist_oracle(grid));

  ordered_json echo;
  echo["command"] = "gamma-check";
  echo["domain"] = ga.domain;
  echo["n"] = ga.n;
  echo["s"] = ga.s;
  echo["R"] = ga.R;
  echo["family_kind"] = qa.kind;
  echo["exponents"] = qa.exponents;
  echo["beta"] = qa.beta;
  ensure_outdir(outdir);
  fgl::write_text_file(outdir + "/gamma.json",
                       fgl::gamma_report_json(seq, energies, echo).dump(2) + "\n");

  bool pass = true;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    std::printf("p-=%-6g shrunk-profile energy=%.8f\n", seq.families[k].p_minus(), energies[k]);
    if (k > 0 && !(energies[k] < energies[k - 1])) {
      std::printf("FAIL: recovery energy did not decrease at step %zu\n", k);
      pass = false;
    }
  }
  std::printf("%s\n", pass ? "recovery energies decrease" : "gamma check FAILED");
  return pass ? 0 : 1;
}

int run_region(const GridArgs& ga, const SeqArgs& qa, const SolverArgs& sa,
               const std::string& f_spec, double tol_region, bool with_samples,
               const std::string& outdir) {
  const fgl::Grid grid = make_grid(ga);
  const fgl::FamilySequence seq = to_sequence(qa);
  const fgl::GridFunction f = parse_f_spec(grid, f_spec);
  const fgl::ExperimentReport rep =
      fgl::run_limit_experiment(seq, f, grid, to_config(sa), 0);
  const fgl::RegionCheckReport reg =
      fgl::region_equation_check(rep.final_u, f, tol_region, with_samples);

  ordered_json echo = experiment_echo("region-check", ga, qa, sa, f_spec, 0, 0);
  echo["tol_region"] = tol_region;
  echo["boundary_samples"] = with_samples;
  ensure_outdir(outdir);
  fgl::write_text_file(outdir + "/region.json",
                       fgl::region_report_json(reg, echo).dump(2) + "\n");

  for (const auto& r : reg.regions)
    std::printf("  [%s] %-24s nodes=%-5d worst=%.4f\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.count, r.worst);
  std::printf("%s\n", reg.all_pass ? "region equations hold" : "region check FAILED");
  return reg.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal Dirichlet energy laboratory: certification, solves, and "
               "large-exponent limit experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("fgl ") + fgl::kArtifactVersion);

  // certify-family
  auto* certify = app.add_subcommand("certify-family", "check the growth inequality suite");
  std::string cert_family;
  int cert_samples = 10000;
  double cert_tol = 1e-9, cert_s = 0.0;
  std::string cert_outdir;
  certify->add_option("family", cert_family, "family spec, e.g. power:p=8 or sumpow:a=2,b=4")
      ->required();
  certify->add_option("--samples", cert_samples, "sample count")->capture_default_str();
  certify->add_option("--tol", cert_tol, "relative tolerance")->capture_default_str();
  certify->add_option("--s", cert_s, "also check pointwise refinement safety at this order");
  certify->add_option("--outdir", cert_outdir, "write certify_report.json here");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "minimize the energy for one family");
  GridArgs solve_grid;
  SolverArgs solve_solver;
  std::string solve_family = "power:p=8", solve_f = "const:1", solve_outdir = "out";
  add_grid_args(solve_cmd, solve_grid);
  add_solver_args(solve_cmd, solve_solver);
  solve_cmd->add_option("--family", solve_family, "family spec")->capture_default_str();
  solve_cmd->add_option("--f", solve_f, "data spec: const:v | bump:... | csv:path")
      ->capture_default_str();
  solve_cmd->add_option("--outdir", solve_outdir, "artifact directory")->capture_default_str();

  // limit-experiment
  auto* limit_cmd = app.add_subcommand("limit-experiment", "solve along a family sequence");
  GridArgs limit_grid;
  SeqArgs limit_seq;
  SolverArgs limit_solver;
  std::string limit_f = "const:1", limit_outdir = "out";
  int limit_trials = 100;
  std::uint64_t limit_seed = 20240817ull;
  add_grid_args(limit_cmd, limit_grid);
  add_seq_args(limit_cmd, limit_seq);
  add_solver_args(limit_cmd, limit_solver);
  limit_cmd->add_option("--f", limit_f, "data spec")->capture_default_str();
  limit_cmd->add_option("--trials", limit_trials, "random profiles in the maximization check")
      ->capture_default_str();
  limit_cmd->add_option("--seed", limit_seed, "random seed")->capture_default_str();
  limit_cmd->add_option("--outdir", limit_outdir, "artifact directory")->capture_default_str();

  // gamma-check
  auto* gamma_cmd = app.add_subcommand("gamma-check", "recovery-sequence energy decay");
  GridArgs gamma_grid;
  SeqArgs gamma_seq;
  std::string gamma_outdir = "out";
  add_grid_args(gamma_cmd, gamma_grid);
  add_seq_args(gamma_cmd, gamma_seq);
  gamma_cmd->add_option("--outdir", gamma_outdir, "artifact directory")->capture_default_str();

  // region-check
  auto* region_cmd = app.add_subcommand("region-check", "limit equation by sign region");
  GridArgs region_grid;
  SeqArgs region_seq;
  SolverArgs region_solver;
  std::string region_f = "const:1", region_outdir = "out";
  double region_tol = 0.1;
  bool region_samples = false;
  add_grid_args(region_cmd, region_grid);
  add_seq_args(region_cmd, region_seq);
  add_solver_args(region_cmd, region_solver);
  region_cmd->add_option("--f", region_f, "data spec")->capture_default_str();
  region_cmd->add_option("--tol-region", region_tol, "per-region tolerance")
      ->capture_default_str();
  region_cmd->add_flag("--boundary-samples", region_samples,
                       "scan boundary sample points too (exact profiles only; discrete "
                       "solutions overshoot within the first cell)");
  region_cmd->add_option("--outdir", region_outdir, "artifact directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (certify->parsed())
      return run_certify(cert_family, cert_samples, cert_tol, cert_s, cert_outdir);
    if (solve_cmd->parsed())
      return run_solve(solve_grid, solve_solver, solve_family, solve_f, solve_outdir);
    if (limit_cmd->parsed())
      return run_limit(limit_grid, limit_seq, limit_solver, limit_f, limit_trials, limit_seed,
                       limit_outdir);
    if (gamma_cmd->parsed()) return run_gamma(gamma_grid, gamma_seq, gamma_outdir);
    if (region_cmd->parsed())
      return run_region(region_grid, region_seq, region_solver, region_f, region_tol,
                        region_samples, region_outdir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
