#pragma once

#include <functional>
#include <span>
#include <vector>

namespace wint {

/// Unperturbed action-angle model: one action I on (-gamma, gamma) and m
/// angles advancing with frequencies f_i(I), forced with period
/// T = 2 pi / omega.
struct ActionAngleModel {
  int m = 1;  ///< number of angle variables
  std::vector<std::function<double(double)>> f;   ///< f_i(I), size m
  std::vector<std::function<double(double)>> df;  ///< d f_i / d I, size m
  double omega = 1.0;  ///< forcing frequency (> 0)
  double gamma = 1.0;  ///< action domain half-width

  double period() const;
  void validate() const;
};

/// Perturbation components F_0..F_m, each 2 pi periodic in every angle and
/// T-periodic in time. F[0] drives the action.
using PerturbFn =
    std::function<double(double I, std::span<const double> theta, double t)>;

struct PerturbationDef {
  std::vector<PerturbFn> F;  ///< size m + 1
};

/// One-period return map truncated at first order in the perturbation size:
///   I      -> I + eps Ftilde_0(I, theta)
///   theta_i -> theta_i + 2 pi f_i(I)/omega + eps Ftilde_i(I, theta)
/// with the Ftilde_i evaluated on demand by composite Simpson quadrature
/// along the unperturbed orbit (the double integral in the angle components
/// uses a cumulative inner integral on the same node grid, one O(N) pass).
class FirstOrderMap {
 public:
  FirstOrderMap(ActionAngleModel model, PerturbationDef pert, int quad_nodes);

  double tilde_F0(double I0, std::span<const double> theta0) const;
  /// i in [1, m]: d f_i/dI (I0) * iint F_0 + int F_i over one period.
  double tilde_F(int i, double I0, std::span<const double> theta0) const;

  const ActionAngleModel& model() const { return model_; }
  int quad_nodes() const { return quad_nodes_; }

 private:
  ActionAngleModel model_;
  PerturbationDef pert_;
  int quad_nodes_;
};

/// Validates the perturbation (spot-checked periodicity), then builds the
/// map and checks quadrature convergence by comparing N against 2N nodes at
/// probe points (Richardson-style); throws std::runtime_error if the
/// refinement still moves any Ftilde_i by more than rich_tol.
FirstOrderMap build_first_order_map(const ActionAngleModel& model,
                                    const PerturbationDef& pert,
                                    int quad_nodes, double rich_tol = 1e-8);

struct MapPoint {
  double I = 0.0;
  std::vector<double> theta;       ///< reduced mod 2 pi
  bool left_domain = false;        ///< |I| reached the domain boundary
};

/// Applies the first-order map. The eps = 0 branch is exact (no quadrature).
MapPoint apply_map(const FirstOrderMap& map, double I,
                   std::span<const double> theta, double eps);

/// Ground truth: RK4-integrates the full perturbed system over one forcing
/// period with step dt_fine and returns the time-T state.
MapPoint direct_flow_map(const ActionAngleModel& model,
                         const PerturbationDef& pert, double I0,
                         std::span<const double> theta0, double eps,
                         double dt_fine);

/// Distance between two map outputs: action difference plus angle
/// differences wrapped to [-pi, pi].
double map_distance(const MapPoint& a, const MapPoint& b);

double wrap_angle(double theta);  ///< reduce to [0, 2 pi)

}  // namespace wint
