#include "wint/integrate.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wint/util.hpp"

namespace wint {

void IntegrationConfig::validate() const {
  if (dt <= 0.0) throw std::invalid_argument("dt must be > 0");
  if (t_max <= 0.0) throw std::invalid_argument("t_max must be > 0");
  if (steps() < 1) throw std::invalid_argument("t_max/dt must be >= 1");
  if (escape_radius <= 0.0)
    throw std::invalid_argument("escape_radius must be > 0");
  if (renorm_every < 1) throw std::invalid_argument("renorm_every must be >= 1");
  if (fd_h <= 0.0) throw std::invalid_argument("fd_h must be > 0");
  if (output_stride < 1)
    throw std::invalid_argument("output_stride must be >= 1");
}

namespace {

bool escaped_state(std::span<const double> u, double radius) {
  return !all_finite(u) || norm2(u) > radius;
}

void matvec(std::span<const double> m, std::span<const double> x,
            std::span<double> y, int n) {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += m[n * i + j] * x[j];
    y[i] = s;
  }
}

// One flow-only step, Euler or RK4, in place.
struct FlowStepper {
  const SystemDef& sys;
  const IntegrationConfig& cfg;
  int n;
  std::vector<double> k1, k2, k3, k4, tmp;

  FlowStepper(const SystemDef& s, const IntegrationConfig& c)
      : sys(s), cfg(c), n(s.dimension), k1(n), k2(n), k3(n), k4(n), tmp(n) {}

  void step(std::vector<double>& u) {
    const double dt = cfg.dt;
    if (cfg.method == Method::euler) {
      sys.field(u, k1);
      for (int i = 0; i < n; ++i) u[i] += dt * k1[i];
      return;
    }
    sys.field(u, k1);
    for (int i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    sys.field(tmp, k2);
    for (int i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    sys.field(tmp, k3);
    for (int i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
    sys.field(tmp, k4);
    for (int i = 0; i < n; ++i)
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
};

// Coupled flow + tangent step.
struct TangentStepper {
  const SystemDef& sys;
  const IntegrationConfig& cfg;
  int n;
  std::vector<double> jac;
  std::vector<double> ku1, ku2, ku3, ku4, kd1, kd2, kd3, kd4, tu, td;

  TangentStepper(const SystemDef& s, const IntegrationConfig& c)
      : sys(s),
        cfg(c),
        n(s.dimension),
        jac(static_cast<std::size_t>(n) * n),
        ku1(n), ku2(n), ku3(n), ku4(n),
        kd1(n), kd2(n), kd3(n), kd4(n),
        tu(n), td(n) {}

  void jacobian(std::span<const double> u) {
    if (sys.analytic_jacobian)
      (*sys.analytic_jacobian)(u, jac);
    else
      jacobian_fd(sys, u, cfg.fd_h, cfg.fd_scheme, jac);
  }

  void step(std::vector<double>& u, std::vector<double>& d) {
    const double dt = cfg.dt;
    if (cfg.method == Method::euler) {
      sys.field(u, ku1);
      jacobian(u);
      matvec(jac, d, kd1, n);
      for (int i = 0; i < n; ++i) u[i] += dt * ku1[i];
      for (int i = 0; i < n; ++i) d[i] += dt * kd1[i];
      return;
    }
    sys.field(u, ku1);
    jacobian(u);
    matvec(jac, d, kd1, n);

    for (int i = 0; i < n; ++i) tu[i] = u[i] + 0.5 * dt * ku1[i];
    for (int i = 0; i < n; ++i) td[i] = d[i] + 0.5 * dt * kd1[i];
    sys.field(tu, ku2);
    jacobian(tu);
    matvec(jac, td, kd2, n);

    for (int i = 0; i < n; ++i) tu[i] = u[i] + 0.5 * dt * ku2[i];
    for (int i = 0; i < n; ++i) td[i] = d[i] + 0.5 * dt * kd2[i];
    sys.field(tu, ku3);
    jacobian(tu);
    matvec(jac, td, kd3, n);

    for (int i = 0; i < n; ++i) tu[i] = u[i] + dt * ku3[i];
    for (int i = 0; i < n; ++i) td[i] = d[i] + dt * kd3[i];
    sys.field(tu, ku4);
    jacobian(tu);
    matvec(jac, td, kd4, n);

    for (int i = 0; i < n; ++i)
      u[i] += dt / 6.0 * (ku1[i] + 2.0 * ku2[i] + 2.0 * ku3[i] + ku4[i]);
    for (int i = 0; i < n; ++i)
      d[i] += dt / 6.0 * (kd1[i] + 2.0 * kd2[i] + 2.0 * kd3[i] + kd4[i]);
  }
};

}  // namespace

FlowResult integrate_flow(const SystemDef& system, const PhaseState& u0,
                          const IntegrationConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(u0.size()) != system.dimension)
    throw std::invalid_argument("integrate_flow: wrong state dimension");
  if (!all_finite(u0))
    throw std::invalid_argument("integrate_flow: non-finite initial state");

  FlowResult out;
  std::vector<double> u = u0;
  const long steps = cfg.steps();

  if (norm2(u) > cfg.escape_radius) {
    out.escape = EscapeEvent{0.0, u};
    return out;
  }
  out.trajectory.times.push_back(0.0);
  out.trajectory.states.push_back(u);

  FlowStepper stepper(system, cfg);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(u);
    const double t = k * cfg.dt;
    if (escaped_state(u, cfg.escape_radius)) {
      out.escape = EscapeEvent{t, u};
      return out;
    }
    if (k % cfg.output_stride == 0) {
      out.trajectory.times.push_back(t);
      out.trajectory.states.push_back(u);
    }
  }
  return out;
}

FtleResult ftle_max(const SystemDef& system, const PhaseState& u0,
                    const IntegrationConfig& cfg,
                    const std::vector<double>& delta0) {
  cfg.validate();
  const int n = system.dimension;
  if (static_cast<int>(u0.size()) != n)
    throw std::invalid_argument("ftle_max: wrong state dimension");
  if (!all_finite(u0))
    throw std::invalid_argument("ftle_max: non-finite initial state");
  if (static_cast<int>(delta0.size()) != n)
    throw std::invalid_argument("ftle_max: wrong tangent dimension");
  if (std::abs(norm2(delta0) - 1.0) > 1e-8)
    throw std::invalid_argument("ftle_max: delta0 must be a unit vector");

  std::vector<double> u = u0;
  std::vector<double> d = delta0;
  const long steps = cfg.steps();
  double log_sum = 0.0;
  int since_renorm = 0;

  auto flush = [&]() {
    // Fold in the growth accumulated since the last renormalization, if it
    // is still representable.
    if (since_renorm > 0) {
      const double nd = norm2(d);
      if (std::isfinite(nd) && nd > 0.0) log_sum += std::log(nd);
    }
  };

  if (norm2(u) > cfg.escape_radius) return {0.0, true, 0.0};

  TangentStepper stepper(system, cfg);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(u, d);
    ++since_renorm;
    if (escaped_state(u, cfg.escape_radius)) {
      flush();
      const double elapsed = k * cfg.dt;
      return {log_sum / elapsed, true, elapsed};
    }
    if (since_renorm == cfg.renorm_every) {
      const double nd = norm2(d);
      log_sum += std::log(nd);
      for (int i = 0; i < n; ++i) d[i] /= nd;
      since_renorm = 0;
    }
  }
  flush();
  const double elapsed = steps * cfg.dt;
  return {log_sum / elapsed, false, elapsed};
}

FtleResult ftle_max(const SystemDef& system, const PhaseState& u0,
                    const IntegrationConfig& cfg) {
  std::vector<double> e1(system.dimension, 0.0);
  e1[0] = 1.0;
  return ftle_max(system, u0, cfg, e1);
}

FtleResult ftle_max_averaged(const SystemDef& system, const PhaseState& u0,
                             const IntegrationConfig& cfg, int m,
                             std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("ftle_max_averaged: m must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = system.dimension;

  KahanSum lambda_sum;
  FtleResult last{};
  for (int s = 0; s < m; ++s) {
    std::vector<double> d(n);
    double nd = 0.0;
    do {
      for (int i = 0; i < n; ++i) d[i] = gauss(rng);
      nd = norm2(d);
    } while (nd < 1e-12);
    for (int i = 0; i < n; ++i) d[i] /= nd;
    last = ftle_max(system, u0, cfg, d);
    if (last.escaped) return last;  // same trajectory for every direction
    lambda_sum.add(last.lambda);
  }
  return {lambda_sum.value() / m, false, last.time};
}

std::string trajectory_csv(
    const Trajectory& traj,
    const std::vector<std::pair<std::string, double>>& param_lines) {
  std::ostringstream os;
  for (const auto& [k, v] : param_lines) os << "# " << k << "=" << fmt17(v) << "\n";
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  if (n == 4) {
    os << "t,x1,y1,x2,y2\n";
  } else {
    os << "t";
    for (std::size_t i = 0; i < n; ++i) os << ",u" << i;
    os << "\n";
  }
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    os << fmt17(traj.times[k]);
    for (double x : traj.states[k]) os << "," << fmt17(x);
    os << "\n";
  }
  return os.str();
}

}  // namespace wint
