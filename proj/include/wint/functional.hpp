#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wint/integrate.hpp"
#include "wint/systems.hpp"

namespace wint {

/// Sampling grid for initial conditions: an nx x nx lattice over (x1, y1)
/// including box endpoints, with (x2, y2) held fixed. Enumeration order is
/// x1-major: index = ix * nx + iy.
struct GridSpec {
  int nx = 5;
  double x1_lo = -1.0, x1_hi = 1.0;
  double y1_lo = -1.0, y1_hi = 1.0;
  double x2 = 0.7, y2 = 0.0;

  int total() const { return nx * nx; }
  void validate() const;
};

std::vector<PhaseState> grid_points(const GridSpec& grid);

struct FtleRecord {
  int index = 0;
  PhaseState u0;
  double rho0 = 1.0;
  double lambda = 0.0;
  bool escaped = false;
  bool regular = false;
};

/// Regular (R=1) iff the orbit did not escape and |lambda| < tol.
bool classify(double lambda, bool escaped, double tol);

struct LambdaStats {
  double min = 0.0, median = 0.0, max = 0.0;
};

struct IntegrabilityReport {
  std::string system_name;
  std::vector<std::pair<std::string, double>> system_params;
  GridSpec grid;
  IntegrationConfig cfg;
  double tol = 1e-2;
  std::uint64_t seed = 0;

  double m_rho = 0.0;
  int n_total = 0, n_regular = 0, n_escaped = 0;
  double weighted_total = 0.0, weighted_regular = 0.0;
  LambdaStats lambda_stats;
  std::vector<FtleRecord> records;
};

/// Deterministic fixed-order compensated reduction of per-point records into
/// the weighted ratio and counters.
void reduce_records(IntegrabilityReport& report);

/// Rejects an Euler-method tolerance below twice the estimated
/// integrator-induced exponent bias (omega_char^2 dt / 2 at the grid's
/// characteristic frequency). Switch to RK4 to probe smaller tolerances.
void validate_tolerance(const SystemDef& system, const GridSpec& grid,
                        const IntegrationConfig& cfg, double tol);

/// Weighted fraction of grid orbits classified regular by their finite-time
/// maximal Lyapunov exponent:
///   m_rho = sum_i rho(u0_i) R_i / sum_i rho(u0_i).
/// Per-point work runs on `workers` threads; the reduction is a fixed-order
/// fold, so the report is identical for any worker count.
IntegrabilityReport compute_m_rho(const SystemDef& system, const GridSpec& grid,
                                  const IntegrationConfig& cfg, double tol,
                                  int workers = 1);

/// One report per alpha, same grid and integration settings.
std::vector<IntegrabilityReport> sweep_alpha(const BenchmarkParams& base,
                                             const std::vector<double>& alphas,
                                             const GridSpec& grid,
                                             const IntegrationConfig& cfg,
                                             double tol, int workers = 1);

struct ConvergenceStudy {
  IntegrabilityReport baseline;
  IntegrabilityReport longer_time;  ///< t_max doubled
  IntegrabilityReport half_dt;      ///< dt halved
  IntegrabilityReport finer_grid;   ///< nx 5 -> 7 (nx + 2 in general)

  double mean_abs_dlambda_time = 0.0;  ///< mean |lambda(2T) - lambda(T)|
  double rel_dm_time = 0.0;            ///< |m(2T) - m| / m
  double rel_dm_dt = 0.0;              ///< |m(dt/2) - m| / m
  double abs_dm_grid = 0.0;            ///< |m(finer grid) - m|
};

ConvergenceStudy convergence_study(const BenchmarkParams& params,
                                   const GridSpec& grid,
                                   const IntegrationConfig& cfg, double tol,
                                   int workers = 1);

}  // namespace wint
