#include "wint/functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wint/util.hpp"

namespace wint {

void GridSpec::validate() const {
  if (nx < 1) throw std::invalid_argument("grid: nx must be >= 1");
  if (x1_hi < x1_lo || y1_hi < y1_lo)
    throw std::invalid_argument("grid: box upper bound below lower bound");
}

std::vector<PhaseState> grid_points(const GridSpec& grid) {
  grid.validate();
  std::vector<PhaseState> pts;
  pts.reserve(grid.total());
  auto coord = [&](double lo, double hi, int i) {
    return grid.nx == 1 ? 0.5 * (lo + hi)
                        : lo + (hi - lo) * i / (grid.nx - 1);
  };
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double x1 = coord(grid.x1_lo, grid.x1_hi, ix);
    for (int iy = 0; iy < grid.nx; ++iy) {
      const double y1 = coord(grid.y1_lo, grid.y1_hi, iy);
      pts.push_back({x1, y1, grid.x2, grid.y2});
    }
  }
  return pts;
}

bool classify(double lambda, bool escaped, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("classify: tol must be > 0");
  return !escaped && std::abs(lambda) < tol;
}

void reduce_records(IntegrabilityReport& report) {
  KahanSum w_total, w_regular;
  int n_regular = 0, n_escaped = 0;
  std::vector<double> lambdas;
  lambdas.reserve(report.records.size());
  for (const auto& r : report.records) {
    w_total.add(r.rho0);
    if (r.regular) {
      w_regular.add(r.rho0);
      ++n_regular;
    }
    if (r.escaped) ++n_escaped;
    lambdas.push_back(r.lambda);
  }
  report.n_total = static_cast<int>(report.records.size());
  report.n_regular = n_regular;
  report.n_escaped = n_escaped;
  report.weighted_total = w_total.value();
  report.weighted_regular = w_regular.value();
  report.m_rho =
      report.weighted_total > 0.0 ? report.weighted_regular / report.weighted_total
                                  : 0.0;

  if (!lambdas.empty()) {
    std::sort(lambdas.begin(), lambdas.end());
    report.lambda_stats.min = lambdas.front();
    report.lambda_stats.max = lambdas.back();
    const std::size_t n = lambdas.size();
    report.lambda_stats.median =
        n % 2 == 1 ? lambdas[n / 2]
                   : 0.5 * (lambdas[n / 2 - 1] + lambdas[n / 2]);
  }
}

void validate_tolerance(const SystemDef& system, const GridSpec& grid,
                        const IntegrationConfig& cfg, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  if (cfg.method != Method::euler) return;

  // Characteristic frequency from the grid itself: median of |V(u)|/|u|.
  std::vector<double> ratios;
  std::vector<double> v(system.dimension);
  for (const auto& u : grid_points(grid)) {
    const double r = norm2(u);
    if (r < 1e-12) continue;
    system.field(u, v);
    ratios.push_back(norm2(v) / r);
  }
  if (ratios.empty()) return;
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2,
                   ratios.end());
  const double omega_char = ratios[ratios.size() / 2];
  const double bias = 0.5 * omega_char * omega_char * cfg.dt;
  if (tol < 2.0 * bias)
    throw std::invalid_argument(
        "tol=" + fmt17(tol) + " is below twice the Euler exponent bias (" +
        fmt17(bias) +
        " at the grid's characteristic frequency); raise tol, lower dt, or "
        "use --method rk4");
}

IntegrabilityReport compute_m_rho(const SystemDef& system, const GridSpec& grid,
                                  const IntegrationConfig& cfg, double tol,
                                  int workers) {
  cfg.validate();
  validate_tolerance(system, grid, cfg, tol);

  const auto pts = grid_points(grid);
  if (pts.empty()) throw std::invalid_argument("compute_m_rho: empty grid");

  IntegrabilityReport report;
  report.system_name = system.name;
  report.system_params = system.params;
  report.grid = grid;
  report.cfg = cfg;
  report.tol = tol;
  report.records.resize(pts.size());

  parallel_for(static_cast<int>(pts.size()), workers, [&](int i) {
    FtleRecord rec;
    rec.index = i;
    rec.u0 = pts[i];
    rec.rho0 = system.density(pts[i]);
    const FtleResult res = ftle_max(system, pts[i], cfg);
    rec.lambda = res.lambda;
    rec.escaped = res.escaped;
    rec.regular = classify(res.lambda, res.escaped, tol);
    report.records[i] = std::move(rec);
  });

  reduce_records(report);
  return report;
}

std::vector<IntegrabilityReport> sweep_alpha(const BenchmarkParams& base,
                                             const std::vector<double>& alphas,
                                             const GridSpec& grid,
                                             const IntegrationConfig& cfg,
                                             double tol, int workers) {
  if (alphas.empty()) throw std::invalid_argument("sweep_alpha: empty list");
  std::vector<IntegrabilityReport> out;
  out.reserve(alphas.size());
  for (double a : alphas) {
    BenchmarkParams p = base;
    p.alpha = a;
    out.push_back(compute_m_rho(make_benchmark_system(p), grid, cfg, tol, workers));
  }
  return out;
}

ConvergenceStudy convergence_study(const BenchmarkParams& params,
                                   const GridSpec& grid,
                                   const IntegrationConfig& cfg, double tol,
                                   int workers) {
  const SystemDef system = make_benchmark_system(params);

  ConvergenceStudy study;
  study.baseline = compute_m_rho(system, grid, cfg, tol, workers);

  IntegrationConfig cfg_t = cfg;
  cfg_t.t_max = 2.0 * cfg.t_max;
  study.longer_time = compute_m_rho(system, grid, cfg_t, tol, workers);

  IntegrationConfig cfg_dt = cfg;
  cfg_dt.dt = 0.5 * cfg.dt;
  study.half_dt = compute_m_rho(system, grid, cfg_dt, tol, workers);

  GridSpec grid_f = grid;
  grid_f.nx = grid.nx + 2;
  study.finer_grid = compute_m_rho(system, grid_f, cfg, tol, workers);

  KahanSum dl;
  for (std::size_t i = 0; i < study.baseline.records.size(); ++i)
    dl.add(std::abs(study.longer_time.records[i].lambda -
                    study.baseline.records[i].lambda));
  study.mean_abs_dlambda_time =
      dl.value() / static_cast<double>(study.baseline.records.size());

  const double m0 = study.baseline.m_rho;
  auto rel = [m0](double m) {
    return m0 != 0.0 ? std::abs(m - m0) / m0 : std::abs(m - m0);
  };
  study.rel_dm_time = rel(study.longer_time.m_rho);
  study.rel_dm_dt = rel(study.half_dt.m_rho);
  study.abs_dm_grid = std::abs(study.finer_grid.m_rho - m0);
  return study;
}

}  // namespace wint
