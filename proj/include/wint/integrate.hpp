#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wint/systems.hpp"

namespace wint {

enum class Method { euler, rk4 };

struct IntegrationConfig {
  double dt = 0.01;
  double t_max = 1500.0;
  Method method = Method::euler;
  double escape_radius = 10.0;
  int renorm_every = 1;  ///< tangent renormalization cadence, in steps
  double fd_h = 1e-6;    ///< Jacobian FD increment (when no analytic Jacobian)
  FdScheme fd_scheme = FdScheme::forward;
  int output_stride = 1;  ///< trajectory storage stride

  long steps() const { return static_cast<long>(t_max / dt + 1e-9); }
  void validate() const;
};

/// Trajectory left the configured domain: a normal outcome, not a failure.
struct EscapeEvent {
  double time = 0.0;
  PhaseState state;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
};

struct FlowResult {
  Trajectory trajectory;  ///< states up to (not including) the escape
  std::optional<EscapeEvent> escape;
};

/// Fixed-step integration of udot = V(u). Stops early with an EscapeEvent
/// when |u| exceeds cfg.escape_radius or any coordinate turns non-finite.
/// A non-finite initial state is an input error.
FlowResult integrate_flow(const SystemDef& system, const PhaseState& u0,
                          const IntegrationConfig& cfg);

struct FtleResult {
  double lambda = 0.0;   ///< finite-time maximal Lyapunov exponent; for an
                         ///< escaped orbit, the pre-escape value
  bool escaped = false;
  double time = 0.0;     ///< elapsed time the exponent was averaged over
};

/// Co-integrates the flow and the tangent (variational) dynamics
/// ddot = DV(u) d, accumulating log ||d|| with periodic renormalization, and
/// returns the accumulated log growth divided by elapsed time. delta0 must be
/// a unit vector.
FtleResult ftle_max(const SystemDef& system, const PhaseState& u0,
                    const IntegrationConfig& cfg,
                    const std::vector<double>& delta0);

/// Same with the default initial tangent direction e1.
FtleResult ftle_max(const SystemDef& system, const PhaseState& u0,
                    const IntegrationConfig& cfg);

/// Mean exponent over m seeded random unit tangent directions (the initial
/// direction is otherwise a free choice).
FtleResult ftle_max_averaged(const SystemDef& system, const PhaseState& u0,
                             const IntegrationConfig& cfg, int m,
                             std::uint64_t seed);

/// CSV export with header `t,x1,y1,x2,y2` (4D) or `t,u0..u{n-1}`; values in
/// 17-significant-digit decimal. `param_lines` are emitted first as
/// `# key=value` comments.
std::string trajectory_csv(const Trajectory& traj,
                           const std::vector<std::pair<std::string, double>>&
                               param_lines = {});

}  // namespace wint
