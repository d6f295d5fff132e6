#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wint {

using PhaseState = std::vector<double>;

/// Parameters of the built-in weighted benchmark system on R^4 with
/// coordinates (x1, y1, x2, y2):
///   rho(u) = 1 + epsilon |u|^2          (Jacobi multiplier, >= 1)
///   V(u)   = (1/rho) (L u + alpha N(u))  with skew-symmetric coupling L
/// so div(rho V) = 0 identically.
struct BenchmarkParams {
  double epsilon = 0.5;  ///< density curvature, must be >= 0
  double delta = 0.3;    ///< linear coupling strength
  double alpha = 0.1;    ///< cubic nonlinearity strength, must be >= 0
};

/// 4x4 constant coupling matrix, stored explicitly and checked
/// skew-symmetric (and traceless) at construction.
struct CouplingMatrix {
  std::array<double, 16> entries{};

  double at(int i, int j) const { return entries[4 * i + j]; }
  /// max |L + L^T| entrywise; 0 for a valid coupling matrix.
  double skew_defect() const;
  double trace() const;

  /// y = L u
  void apply(std::span<const double> u, std::span<double> y) const;
};

/// Builds the benchmark coupling matrix (off-diagonal rotation blocks with
/// +-1 and cross-coupling +-delta). Throws if the result is not exactly
/// skew-symmetric.
CouplingMatrix benchmark_coupling(double delta);

using FieldFn = std::function<void(std::span<const double>, std::span<double>)>;
using DensityFn = std::function<double(std::span<const double>)>;
/// Writes the n x n Jacobian, row-major, into the output span.
using JacobianFn = std::function<void(std::span<const double>, std::span<double>)>;

/// A dynamical system given by evaluators. Evaluators must be pure: all
/// modules assume they can be called from any number of threads.
struct SystemDef {
  int dimension = 0;
  FieldFn field;
  DensityFn density;
  std::optional<JacobianFn> analytic_jacobian;  ///< used instead of FD when set
  std::string name;
  std::vector<std::pair<std::string, double>> params;  ///< echoed into reports
};

/// rho(u) = 1 + epsilon |u|^2. Throws std::invalid_argument on non-finite
/// input (a corrupted state, not a modelling outcome).
double eval_density(const BenchmarkParams& p, std::span<const double> u);

/// V(u) = (1/rho)(L u + alpha N(u)),
/// N(u) = (x1^3 - 3 x1 y1^2, y1^3 - 3 y1 x1^2,
///         x2^3 - 3 x2 y2^2, y2^3 - 3 y2 x2^2).
void eval_benchmark_field(const BenchmarkParams& p, std::span<const double> u,
                          std::span<double> out);

/// Analytic Jacobian of the benchmark field (for cross-checking the FD path).
void eval_benchmark_jacobian(const BenchmarkParams& p,
                             std::span<const double> u, std::span<double> jac);

/// Assembles the benchmark SystemDef. The analytic Jacobian is attached only
/// on request; the default replicates the FD-based experiment setup.
SystemDef make_benchmark_system(const BenchmarkParams& p,
                                bool with_analytic_jacobian = false);

enum class FdScheme { forward, central };

/// Finite-difference Jacobian of system.field at u, written row-major into
/// jac (size n*n). Column j uses increment h along coordinate j.
void jacobian_fd(const SystemDef& system, std::span<const double> u, double h,
                 FdScheme scheme, std::span<double> jac);

std::vector<double> jacobian_fd(const SystemDef& system, const PhaseState& u,
                                double h, FdScheme scheme);

/// Max over sample points of |sum_i d(rho V_i)/dx_i|, with central
/// differences of step h applied to the product rho(u) V(u). For any system
/// admitting rho as a Jacobi multiplier this is an O(h^2) residue.
double check_weighted_divergence(const SystemDef& system,
                                 const std::vector<PhaseState>& samples,
                                 double h);

}  // namespace wint
