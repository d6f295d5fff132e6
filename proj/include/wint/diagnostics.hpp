#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace wint {

/// A scalar function of one real variable equipped with derivatives. When
/// `derivs` is shorter than the requested order, missing derivatives are
/// computed by Richardson-extrapolated central differences.
struct DerivedFn {
  std::function<double(double)> value;
  std::vector<std::function<double(double)>> derivs;  ///< order 1, 2, ...
};

/// k-th derivative by central differences with one Richardson refinement.
/// base_h is used for k <= 2; higher orders widen the step to keep the
/// stencil above rounding noise.
double nth_derivative_fd(const std::function<double(double)>& fn, double x,
                         int k, double base_h = 1e-4);

/// Determinant of the matrix whose row k holds the k-th derivatives of the
/// frequency functions at I. Rows are k = 0..n-2 by default, or k = 1..n-1
/// with first_derivative_rows (the variant used for the one-action twist
/// condition).
double wronskian_det(const std::vector<DerivedFn>& f, double I,
                     bool first_derivative_rows = false);

struct NondegeneracyResult {
  bool pass = false;
  double min_abs_det = 0.0;
  double argmin = 0.0;
};

/// Samples |wronskian_det| uniformly on [lo, hi] and compares the minimum
/// against tau.
NondegeneracyResult check_nondegeneracy(const std::vector<DerivedFn>& f,
                                        double lo, double hi, int grid_count,
                                        double tau,
                                        bool first_derivative_rows = false);

struct ResonanceResult {
  double min_abs = 0.0;
  std::vector<int> p;  ///< a minimizing integer vector
};

/// Exact enumeration of min |<p, omega>| over integer vectors p with
/// 0 < ||p||_inf <= max_order.
ResonanceResult resonance_min(const std::vector<double>& omega, int max_order);

/// Fourier coefficients g^j for j in [-max_j, max_j] of a real function on
/// [0, 2 pi), from the uniform-grid discrete Fourier sum (spectrally
/// accurate for smooth periodic g). nodes must be a power of two with
/// nodes >= 4 max_j.
struct FourierTable {
  int max_j = 0;
  std::vector<std::complex<double>> c;  ///< index j + max_j
  bool truncation_warning = false;  ///< |g^{+-max_j}| not negligible

  std::complex<double> coeff(int j) const { return c[j + max_j]; }
};

FourierTable fourier_coeffs(const std::function<double(double)>& g, int max_j,
                            int nodes);

/// Ingredients of the torus non-persistence test for a one-angle system
///   Idot_i = eps g_i(I, theta),  thetadot = f(I) + O(eps)
/// on an invariant manifold {F0(I) = 0}.
struct NonpersistenceModel {
  std::function<double(std::span<const double>)> F0;
  std::function<std::vector<double>(std::span<const double>)> grad_F0;
  std::vector<std::function<double(std::span<const double>, double)>> g;
  std::function<double(std::span<const double>)> f;
};

enum class NonpersistenceVerdict { condition1, condition2, inconclusive };

struct NonpersistenceReport {
  NonpersistenceVerdict verdict = NonpersistenceVerdict::inconclusive;
  double cond1_min = 0.0;     ///< min over samples |ghat^0 . grad F0|
  bool freq_vanishes = false; ///< some sample has |f(I)| <= tol_f
  /// For each harmonic j = 1..max_j: the largest (over multiples k = N j,
  /// k <= harmonic_cap) of min-over-samples |ghat^k . grad F0|.
  std::vector<std::pair<int, double>> per_j_min;
  int max_j = 0;
  int harmonic_cap = 0;  ///< quantifiers truncated at this harmonic
};

/// Evaluates condition 1 (angle-averaged perturbation transverse to the
/// manifold); if it fails numerically, evaluates the condition-2
/// ingredients. The "for every j some multiple k = N j" quantifier is
/// truncated at harmonic_cap = nodes / 4, recorded in the report.
NonpersistenceReport nonpersistence_conditions(
    const NonpersistenceModel& model,
    const std::vector<std::vector<double>>& manifold_samples, int max_j,
    int nodes, double threshold = 1e-8, double tol_f = 1e-8);

/// Samples for a graph-type manifold I_1 = h(I_2..I_l): a uniform grid over
/// the remaining actions with `count` points per axis.
std::vector<std::vector<double>> graph_manifold_samples(
    const std::function<double(std::span<const double>)>& h,
    const std::vector<std::pair<double, double>>& ranges, int count);

}  // namespace wint
