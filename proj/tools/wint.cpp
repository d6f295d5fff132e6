// wint: numerical toolkit for weighted partial integrability of vector
// fields with a Jacobi multiplier (div(rho V) = 0).
//
// Subcommands: compute, sweep, converge, trajectory, poincare, diagnose,
// verify-divergence. Exit codes: 0 success, 1 configuration error,
// 2 numerical failure.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wint/diagnostics.hpp"
#include "wint/functional.hpp"
#include "wint/integrate.hpp"
#include "wint/io.hpp"
#include "wint/poincare.hpp"
#include "wint/systems.hpp"
#include "wint/util.hpp"
#include "wint/version.hpp"

namespace {

struct Options {
  double epsilon = 0.5;
  double delta = 0.3;
  double alpha = 0.1;
  int grid_nx = 5;
  double box_lo = -1.0;
  double box_hi = 1.0;
  double x2 = 0.7;
  double y2 = 0.0;
  double dt = 0.01;
  double t_max = 1500.0;
  double tol = 1e-2;
  double fd_h = 1e-6;
  double escape_radius = 10.0;
  std::string method = "euler";
  int quad_nodes = 512;
  std::vector<double> alphas;
  int workers = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
  std::string out;
  std::string ftle_csv_path = "ftle.csv";
  std::string traj_csv_path = "trajectory.csv";
  std::vector<double> ic = {0.5, 0.5, 0.7, 0.0};
  int stride = 10;
  int samples = 100;
  double div_h = 1e-5;
  double div_threshold = 1e-8;
  // diagnose knobs
  std::string diag_model = "trig";
  double gamma = 1.0;
  double tau = 1e-3;
  int grid_count = 201;
  std::vector<double> omega_list;
  int max_order = 5;
  int max_j = 4;
  int nodes = 256;
};

void add_physics_flags(CLI::App* sub, Options& o) {
  sub->add_option("--epsilon", o.epsilon, "density curvature (rho = 1 + eps|u|^2)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--delta", o.delta, "linear coupling")->capture_default_str();
  sub->add_option("--alpha", o.alpha, "cubic nonlinearity strength")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_integration_flags(CLI::App* sub, Options& o) {
  sub->add_option("--dt", o.dt, "time step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--t-max", o.t_max, "final integration time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--fd-h", o.fd_h, "Jacobian FD increment")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--escape-radius", o.escape_radius,
                  "norm beyond which an orbit counts as escaped")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--method", o.method, "integrator")
      ->check(CLI::IsMember({"euler", "rk4"}))
      ->capture_default_str();
}

void add_grid_flags(CLI::App* sub, Options& o) {
  sub->add_option("--grid-nx", o.grid_nx, "grid points per sampled axis")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--box-lo", o.box_lo, "sampling box lower bound for x1 and y1")
      ->capture_default_str();
  sub->add_option("--box-hi", o.box_hi, "sampling box upper bound for x1 and y1")
      ->capture_default_str();
  sub->add_option("--x2", o.x2, "fixed x2 coordinate")->capture_default_str();
  sub->add_option("--y2", o.y2, "fixed y2 coordinate")->capture_default_str();
  sub->add_option("--tol", o.tol, "exponent threshold for regular orbits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_run_flags(CLI::App* sub, Options& o, std::string& config_path) {
  sub->add_option("--workers", o.workers, "worker threads (0 = all cores)")
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "seed recorded in outputs")
      ->capture_default_str();
  sub->add_option("--config", config_path,
                  "flat key=value configuration file (command line wins)");
}

wint::BenchmarkParams params_of(const Options& o) {
  return {o.epsilon, o.delta, o.alpha};
}

wint::GridSpec grid_of(const Options& o) {
  wint::GridSpec g;
  g.nx = o.grid_nx;
  g.x1_lo = g.y1_lo = o.box_lo;
  g.x1_hi = g.y1_hi = o.box_hi;
  g.x2 = o.x2;
  g.y2 = o.y2;
  return g;
}

wint::IntegrationConfig cfg_of(const Options& o) {
  wint::IntegrationConfig cfg;
  cfg.dt = o.dt;
  cfg.t_max = o.t_max;
  cfg.method = wint::parse_method(o.method);
  cfg.escape_radius = o.escape_radius;
  cfg.fd_h = o.fd_h;
  return cfg;
}

int workers_of(const Options& o) {
  if (o.workers > 0) return o.workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

int run_compute(const Options& o) {
  const auto system = wint::make_benchmark_system(params_of(o));
  auto report =
      wint::compute_m_rho(system, grid_of(o), cfg_of(o), o.tol, workers_of(o));
  report.seed = o.seed;
  wint::atomic_write_file(o.out.empty() ? "report.json" : o.out,
                          wint::report_json(report));
  wint::atomic_write_file(o.ftle_csv_path, wint::ftle_csv(report));
  std::cout << "m_rho = " << wint::fmt17(report.m_rho) << "  (regular "
            << report.n_regular << "/" << report.n_total << ", escaped "
            << report.n_escaped << ")\n";
  if (report.n_escaped == report.n_total) {
    std::cerr << "error: all orbits escaped\n";
    return 2;
  }
  return 0;
}

int run_sweep(const Options& o) {
  std::vector<double> alphas = o.alphas;
  if (alphas.empty()) alphas = {0.0, 0.1, 0.3};
  auto reports = wint::sweep_alpha(params_of(o), alphas, grid_of(o), cfg_of(o),
                                   o.tol, workers_of(o));
  for (auto& r : reports) r.seed = o.seed;
  wint::atomic_write_file(o.out.empty() ? "sweep.csv" : o.out,
                          wint::sweep_csv(reports));
  for (std::size_t i = 0; i < alphas.size(); ++i)
    std::cout << "alpha = " << alphas[i]
              << "  m_rho = " << wint::fmt17(reports[i].m_rho) << "\n";
  return 0;
}

int run_converge(const Options& o) {
  auto study = wint::convergence_study(params_of(o), grid_of(o), cfg_of(o),
                                       o.tol, workers_of(o));
  wint::atomic_write_file(o.out.empty() ? "convergence.json" : o.out,
                          wint::convergence_json(study));
  std::cout << "baseline m_rho = " << wint::fmt17(study.baseline.m_rho) << "\n"
            << "mean |dlambda| (T -> 2T) = "
            << wint::fmt17(study.mean_abs_dlambda_time) << "\n"
            << "rel |dm| (T -> 2T) = " << wint::fmt17(study.rel_dm_time) << "\n"
            << "rel |dm| (dt -> dt/2) = " << wint::fmt17(study.rel_dm_dt) << "\n"
            << "abs |dm| (finer grid) = " << wint::fmt17(study.abs_dm_grid)
            << "\n";
  return 0;
}

int run_trajectory(const Options& o) {
  std::vector<double> alphas = o.alphas;
  if (alphas.empty()) alphas = {0.0, 0.1, 0.5};
  if (o.ic.size() != 4)
    throw CLI::ValidationError("--ic", "need exactly 4 coordinates");

  wint::IntegrationConfig cfg = cfg_of(o);
  cfg.output_stride = o.stride;

  for (double a : alphas) {
    wint::BenchmarkParams p = params_of(o);
    p.alpha = a;
    const auto system = wint::make_benchmark_system(p);
    const auto res = wint::integrate_flow(system, o.ic, cfg);

    std::vector<std::pair<std::string, double>> meta = system.params;
    meta.emplace_back("dt", cfg.dt);
    meta.emplace_back("t_max", cfg.t_max);
    meta.emplace_back("stride", cfg.output_stride);
    meta.emplace_back("escaped", res.escape ? 1.0 : 0.0);
    if (res.escape) meta.emplace_back("escape_time", res.escape->time);

    std::string path = o.traj_csv_path;
    if (alphas.size() > 1) {
      std::ostringstream tg;
      tg << "_alpha" << a;
      const std::string tag = tg.str();
      const auto dot = path.rfind(".csv");
      path = dot == std::string::npos ? path + tag
                                      : path.substr(0, dot) + tag + ".csv";
    }
    wint::atomic_write_file(path, wint::trajectory_csv(res.trajectory, meta));
    std::cout << "alpha = " << a << " -> " << path
              << (res.escape ? "  (escaped at t=" +
                                   wint::fmt17(res.escape->time) + ")"
                             : "")
              << "\n";
  }
  return 0;
}

int run_poincare(const Options& o) {
  using std::numbers::pi;
  wint::ActionAngleModel model;
  model.m = 1;
  model.f = {[](double I) { return I; }};
  model.df = {[](double) { return 1.0; }};
  model.omega = 1.0;
  model.gamma = 1.0;

  wint::PerturbationDef pert;
  pert.F = {[](double, std::span<const double> th, double) {
              return std::sin(th[0]);
            },
            [](double, std::span<const double>, double) { return 0.0; }};

  const auto map = wint::build_first_order_map(model, pert, o.quad_nodes);
  const double I0 = 0.5;
  const std::vector<double> th0 = {0.0};
  const double dt_fine = model.period() / 1e5;

  std::ostringstream os;
  os << "# tool_version=" << wint::kToolVersion << "\n";
  os << "# model=sine-forcing f(I)=I omega=1\n";
  os << "# I0=" << wint::fmt17(I0) << " theta0=0 quad_nodes=" << o.quad_nodes
     << " dt_fine=" << wint::fmt17(dt_fine) << "\n";
  os << "epsilon,map_I,map_theta1,oracle_I,oracle_theta1,error\n";
  for (double eps : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const auto approx = wint::apply_map(map, I0, th0, eps);
    const auto exact = wint::direct_flow_map(model, pert, I0, th0, eps, dt_fine);
    os << wint::fmt17(eps) << "," << wint::fmt17(approx.I) << ","
       << wint::fmt17(approx.theta[0]) << "," << wint::fmt17(exact.I) << ","
       << wint::fmt17(exact.theta[0]) << ","
       << wint::fmt17(wint::map_distance(approx, exact)) << "\n";
  }
  wint::atomic_write_file(o.out.empty() ? "poincare_scaling.csv" : o.out,
                          os.str());
  std::cout << "wrote first-order map scaling study\n";
  return 0;
}

std::vector<wint::DerivedFn> diag_frequencies(const std::string& name) {
  if (name == "linear")
    return {{[](double) { return 1.0; }, {[](double) { return 0.0; }}},
            {[](double I) { return I; }, {[](double) { return 1.0; }}}};
  if (name == "poly")
    return {{[](double I) { return I; }, {[](double) { return 1.0; }}},
            {[](double I) { return I * I; }, {[](double I) { return 2.0 * I; }}}};
  // trig
  return {{[](double I) { return std::cos(I); },
           {[](double I) { return -std::sin(I); }}},
          {[](double I) { return std::sin(I); },
           {[](double I) { return std::cos(I); }}}};
}

int run_diagnose(const Options& o) {
  const auto f = diag_frequencies(o.diag_model);
  const auto nd =
      wint::check_nondegeneracy(f, -o.gamma, o.gamma, o.grid_count, o.tau);

  std::vector<double> omega = o.omega_list;
  if (omega.empty())
    for (const auto& fi : f) omega.push_back(fi.value(0.5));
  const auto res = wint::resonance_min(omega, o.max_order);

  const auto table = wint::fourier_coeffs(
      [](double th) { return std::cos(th); }, o.max_j, o.nodes);

  // Bundled non-persistence demo: two actions, perturbation g = (cos th, 0),
  // manifold {I1 = 0}, frequency f(I) = I1.
  wint::NonpersistenceModel np;
  np.F0 = [](std::span<const double> I) { return I[0]; };
  np.grad_F0 = [](std::span<const double>) { return std::vector<double>{1.0, 0.0}; };
  np.g = {[](std::span<const double>, double th) { return std::cos(th); },
          [](std::span<const double>, double) { return 0.0; }};
  np.f = [](std::span<const double> I) { return I[0]; };
  const auto samples = wint::graph_manifold_samples(
      [](std::span<const double>) { return 0.0; }, {{-1.0, 1.0}}, 9);
  const auto npr = wint::nonpersistence_conditions(np, samples, 1, o.nodes);

  nlohmann::ordered_json j;
  j["params"] = {{"model", o.diag_model}, {"gamma", o.gamma},
                 {"tau", o.tau},          {"grid_count", o.grid_count},
                 {"max_order", o.max_order}, {"max_j", o.max_j},
                 {"nodes", o.nodes}};
  j["wronskian"] = {{"min", nd.min_abs_det},
                    {"argmin", nd.argmin},
                    {"pass", nd.pass}};
  j["resonance"] = {{"omega", omega}, {"min", res.min_abs}, {"p", res.p}};
  nlohmann::ordered_json fj;
  for (int k = -table.max_j; k <= table.max_j; ++k)
    fj[std::to_string(k)] = {table.coeff(k).real(), table.coeff(k).imag()};
  j["fourier"] = {{"function", "cos(theta)"},
                  {"coefficients", fj},
                  {"truncation_warning", table.truncation_warning}};
  nlohmann::ordered_json pj = nlohmann::ordered_json::array();
  for (const auto& [jj, v] : npr.per_j_min)
    pj.push_back({{"j", jj}, {"min", v}});
  j["nonpersistence"] = {
      {"condition1_min", npr.cond1_min},
      {"freq_vanishes", npr.freq_vanishes},
      {"per_j_min", pj},
      {"harmonic_cap", npr.harmonic_cap},
      {"verdict",
       npr.verdict == wint::NonpersistenceVerdict::condition1   ? "condition1"
       : npr.verdict == wint::NonpersistenceVerdict::condition2 ? "condition2"
                                                                : "inconclusive"}};
  j["tool_version"] = wint::kToolVersion;
  wint::atomic_write_file(o.out.empty() ? "diagnostics.json" : o.out,
                          j.dump(2) + "\n");
  std::cout << "wronskian min |det| = " << wint::fmt17(nd.min_abs_det)
            << (nd.pass ? " (pass)" : " (fail)") << "\n"
            << "resonance min |<p,omega>| = " << wint::fmt17(res.min_abs)
            << "\n";
  return 0;
}

int run_verify_divergence(const Options& o) {
  const auto system = wint::make_benchmark_system(params_of(o));
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::vector<wint::PhaseState> pts(o.samples);
  for (auto& u : pts) u = {box(rng), box(rng), box(rng), box(rng)};
  const double worst = wint::check_weighted_divergence(system, pts, o.div_h);
  std::cout << "max |div(rho V)| = " << wint::fmt17(worst) << " over "
            << o.samples << " samples (h=" << wint::fmt17(o.div_h) << ")\n";
  if (worst > o.div_threshold) {
    std::cerr << "error: divergence residue above threshold "
              << wint::fmt17(o.div_threshold) << "\n";
    return 2;
  }
  return 0;
}

std::string valid_keys(const CLI::App* sub) {
  std::string keys;
  for (const auto* opt : sub->get_options()) {
    if (!keys.empty()) keys += ", ";
    keys += opt->get_name();
  }
  return keys;
}

// Expands `--config FILE` in-place: each `key=value` line of the flat file
// becomes a `--key value` token pair spliced in right after the subcommand
// name, unless the same option already appears on the command line (the
// command line always wins). Unknown keys are configuration errors.
int expand_config(std::vector<std::string>& args, const CLI::App* sub,
                  std::size_t sub_pos) {
  std::string path;
  for (std::size_t k = sub_pos + 1; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    else if (args[k].rfind("--config=", 0) == 0)
      path = args[k].substr(std::string("--config=").size());
  }
  if (path.empty()) return 0;

  std::ifstream in(path);
  if (!in) {
    std::cerr << "configuration error: cannot open config file '" << path
              << "'\n";
    return 1;
  }

  std::vector<std::string> injected;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "configuration error: " << path << ":" << lineno
                << ": expected key=value\n";
      return 1;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;

    if (key == "config" || !sub->get_option_no_throw(flag)) {
      std::cerr << "configuration error: " << path << ":" << lineno
                << ": unknown key '" << key << "'\n"
                << "valid keys for '" << sub->get_name()
                << "': " << valid_keys(sub) << "\n";
      return 1;
    }
    bool on_cli = false;
    for (std::size_t k = sub_pos + 1; k < args.size(); ++k)
      if (args[k] == flag || args[k].rfind(flag + "=", 0) == 0) on_cli = true;
    if (on_cli) continue;
    injected.push_back(flag);
    injected.push_back(value);
  }
  args.insert(args.begin() + sub_pos + 1, injected.begin(), injected.end());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted partial integrability toolkit"};
  app.set_version_flag("--version", wint::kToolVersion);
  app.require_subcommand(1);
  Options o;
  std::string config_path;

  auto* compute = app.add_subcommand(
      "compute", "compute m_rho on the sampling grid; writes report JSON and FTLE CSV");
  add_physics_flags(compute, o);
  add_integration_flags(compute, o);
  add_grid_flags(compute, o);
  add_run_flags(compute, o, config_path);
  compute->add_option("--out", o.out, "report JSON path (default report.json)");
  compute->add_option("--ftle-csv", o.ftle_csv_path, "per-orbit FTLE CSV path")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "compute m_rho for a list of alphas");
  add_physics_flags(sweep, o);
  add_integration_flags(sweep, o);
  add_grid_flags(sweep, o);
  add_run_flags(sweep, o, config_path);
  sweep->add_option("--alphas", o.alphas, "alpha values (default 0,0.1,0.3)")
      ->delimiter(',');
  sweep->add_option("--out", o.out, "sweep CSV path (default sweep.csv)");

  auto* converge = app.add_subcommand(
      "converge", "sensitivity of m_rho to T, dt, and grid resolution");
  add_physics_flags(converge, o);
  add_integration_flags(converge, o);
  add_grid_flags(converge, o);
  add_run_flags(converge, o, config_path);
  converge->add_option("--out", o.out,
                       "study JSON path (default convergence.json)");

  auto* traj = app.add_subcommand(
      "trajectory", "emit regime trajectories as CSV for external plotting");
  add_physics_flags(traj, o);
  add_integration_flags(traj, o);
  add_run_flags(traj, o, config_path);
  traj->add_option("--alphas", o.alphas, "alpha values (default 0,0.1,0.5)")
      ->delimiter(',');
  traj->add_option("--ic", o.ic, "initial condition x1,y1,x2,y2")
      ->delimiter(',')
      ->expected(4)
      ->capture_default_str();
  traj->add_option("--stride", o.stride, "output every k-th step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  traj->add_option("--traj-csv", o.traj_csv_path, "trajectory CSV path")
      ->capture_default_str();

  auto* poinc = app.add_subcommand(
      "poincare",
      "first-order return map vs direct integration: error scaling CSV");
  poinc->add_option("--quad-nodes", o.quad_nodes, "quadrature panels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  poinc->add_option("--out", o.out,
                    "scaling CSV path (default poincare_scaling.csv)");
  add_run_flags(poinc, o, config_path);

  auto* diag = app.add_subcommand(
      "diagnose", "nondegeneracy / resonance / non-persistence diagnostics");
  diag->add_option("--model", o.diag_model, "frequency family")
      ->check(CLI::IsMember({"linear", "trig", "poly"}))
      ->capture_default_str();
  diag->add_option("--gamma", o.gamma, "action interval half-width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diag->add_option("--tau", o.tau, "nondegeneracy threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diag->add_option("--grid-count", o.grid_count, "action samples")
      ->capture_default_str();
  diag->add_option("--omega", o.omega_list,
                   "frequency vector for the resonance scan")
      ->delimiter(',');
  diag->add_option("--max-order", o.max_order, "resonance lattice cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diag->add_option("--max-j", o.max_j, "Fourier table extent")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diag->add_option("--nodes", o.nodes, "Fourier grid size (power of two)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diag->add_option("--out", o.out,
                   "diagnostics JSON path (default diagnostics.json)");
  add_run_flags(diag, o, config_path);

  auto* verify = app.add_subcommand(
      "verify-divergence",
      "check max |div(rho V)| over random samples in [-2,2]^4");
  add_physics_flags(verify, o);
  verify->add_option("--samples", o.samples, "number of sample points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--div-h", o.div_h, "central FD increment")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--threshold", o.div_threshold, "acceptable residue")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_run_flags(verify, o, config_path);

  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t pos = 0; pos < args.size(); ++pos) {
    const CLI::App* sub = app.get_subcommand_no_throw(args[pos]);
    if (sub != nullptr) {
      const int rc = expand_config(args, sub, pos);
      if (rc != 0) return rc;
      break;
    }
  }

  CLI::App* parsed = nullptr;
  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
    parsed = app.get_subcommands().front();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (parsed == compute) return run_compute(o);
    if (parsed == sweep) return run_sweep(o);
    if (parsed == converge) return run_converge(o);
    if (parsed == traj) return run_trajectory(o);
    if (parsed == poinc) return run_poincare(o);
    if (parsed == diag) return run_diagnose(o);
    if (parsed == verify) return run_verify_divergence(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
