#include "wint/poincare.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wint/quadrature.hpp"
#include "wint/util.hpp"

namespace wint {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

double ActionAngleModel::period() const { return kTwoPi / omega; }

void ActionAngleModel::validate() const {
  if (m < 1) throw std::invalid_argument("model: need at least one angle");
  if (static_cast<int>(f.size()) != m || static_cast<int>(df.size()) != m)
    throw std::invalid_argument("model: f/df must have m entries");
  if (omega <= 0.0) throw std::invalid_argument("model: omega must be > 0");
  if (gamma <= 0.0) throw std::invalid_argument("model: gamma must be > 0");
  // The frequency vector may vanish at isolated actions (a resonant circle),
  // but a model whose frequencies vanish across the whole interval is
  // degenerate and rejected.
  int vanishing = 0, probes = 0;
  for (int k = 0; k <= 16; ++k) {
    const double I = -gamma + 2.0 * gamma * k / 16.0;
    double s = 0.0;
    for (const auto& fi : f) {
      const double v = fi(I);
      s += v * v;
    }
    ++probes;
    if (s == 0.0) ++vanishing;
  }
  if (vanishing == probes)
    throw std::invalid_argument("model: frequency vector vanishes identically");
}

FirstOrderMap::FirstOrderMap(ActionAngleModel model, PerturbationDef pert,
                             int quad_nodes)
    : model_(std::move(model)), pert_(std::move(pert)), quad_nodes_(quad_nodes) {
  model_.validate();
  if (static_cast<int>(pert_.F.size()) != model_.m + 1)
    throw std::invalid_argument("perturbation: need m + 1 components");
  if (quad_nodes_ < 64 || quad_nodes_ % 2 != 0)
    throw std::invalid_argument("quad_nodes must be even and >= 64");
}

namespace {

// Samples pert component `comp` along the unperturbed orbit
// theta(t) = f(I0) t + theta0 on the uniform period grid.
std::vector<double> sample_along_orbit(const ActionAngleModel& model,
                                       const PerturbFn& comp, double I0,
                                       std::span<const double> theta0, int n) {
  const double T = model.period();
  const double h = T / n;
  std::vector<double> freq(model.m);
  for (int i = 0; i < model.m; ++i) freq[i] = model.f[i](I0);
  std::vector<double> th0(theta0.size());
  for (std::size_t i = 0; i < theta0.size(); ++i) th0[i] = wrap_angle(theta0[i]);

  std::vector<double> vals(static_cast<std::size_t>(n) + 1);
  std::vector<double> th(model.m);
  for (int k = 0; k <= n; ++k) {
    const double t = k * h;
    for (int i = 0; i < model.m; ++i) th[i] = freq[i] * t + th0[i];
    vals[k] = comp(I0, th, t);
  }
  return vals;
}

double tilde_F0_impl(const ActionAngleModel& model, const PerturbationDef& pert,
                     double I0, std::span<const double> theta0, int n) {
  const double h = model.period() / n;
  return simpson(sample_along_orbit(model, pert.F[0], I0, theta0, n), h);
}

double tilde_Fi_impl(const ActionAngleModel& model, const PerturbationDef& pert,
                     int i, double I0, std::span<const double> theta0, int n) {
  const double h = model.period() / n;
  const auto f0 = sample_along_orbit(model, pert.F[0], I0, theta0, n);
  const auto inner = cumulative_simpson(f0, h);
  const double dbl = simpson(inner, h);
  const double single =
      simpson(sample_along_orbit(model, pert.F[i], I0, theta0, n), h);
  return model.df[i - 1](I0) * dbl + single;
}

}  // namespace

double FirstOrderMap::tilde_F0(double I0, std::span<const double> theta0) const {
  return tilde_F0_impl(model_, pert_, I0, theta0, quad_nodes_);
}

double FirstOrderMap::tilde_F(int i, double I0,
                              std::span<const double> theta0) const {
  if (i < 1 || i > model_.m)
    throw std::invalid_argument("tilde_F: component out of range");
  return tilde_Fi_impl(model_, pert_, i, I0, theta0, quad_nodes_);
}

FirstOrderMap build_first_order_map(const ActionAngleModel& model,
                                    const PerturbationDef& pert,
                                    int quad_nodes, double rich_tol) {
  FirstOrderMap map(model, pert, quad_nodes);
  const double T = model.period();

  // Spot-check periodicity of each component in every angle and in time.
  const double probes[] = {0.37, 1.91, 4.4};
  std::vector<double> th(model.m);
  for (const auto& comp : pert.F) {
    for (double base : probes) {
      for (int i = 0; i < model.m; ++i) th[i] = wrap_angle(base * (i + 1));
      const double I = 0.25 * model.gamma;
      const double t = 0.3 * T;
      const double ref = comp(I, th, t);
      const double scale = 1.0 + std::abs(ref);
      if (std::abs(comp(I, th, t + T) - ref) > 1e-12 * scale)
        throw std::invalid_argument("perturbation not T-periodic in t");
      for (int j = 0; j < model.m; ++j) {
        std::vector<double> shifted = th;
        shifted[j] += kTwoPi;
        if (std::abs(comp(I, shifted, t) - ref) > 1e-12 * scale)
          throw std::invalid_argument(
              "perturbation not 2pi-periodic in theta_" + std::to_string(j + 1));
      }
    }
  }

  // Quadrature convergence at probe points: N vs 2N nodes.
  const double actions[] = {-0.5 * model.gamma, 0.0, 0.5 * model.gamma};
  for (double I0 : actions) {
    for (double base : {0.0, 2.3}) {
      for (int i = 0; i < model.m; ++i) th[i] = wrap_angle(base + i);
      double diff = std::abs(tilde_F0_impl(model, pert, I0, th, quad_nodes) -
                             tilde_F0_impl(model, pert, I0, th, 2 * quad_nodes));
      for (int i = 1; i <= model.m; ++i)
        diff = std::max(
            diff, std::abs(tilde_Fi_impl(model, pert, i, I0, th, quad_nodes) -
                           tilde_Fi_impl(model, pert, i, I0, th,
                                         2 * quad_nodes)));
      if (diff > rich_tol)
        throw std::runtime_error(
            "first-order map quadrature did not converge (N vs 2N differ by " +
            fmt17(diff) + "); raise quad_nodes");
    }
  }
  return map;
}

MapPoint apply_map(const FirstOrderMap& map, double I,
                   std::span<const double> theta, double eps) {
  const ActionAngleModel& model = map.model();
  if (static_cast<int>(theta.size()) != model.m)
    throw std::invalid_argument("apply_map: wrong angle count");
  if (std::abs(I) >= model.gamma)
    throw std::invalid_argument("apply_map: action outside domain");

  MapPoint out;
  out.theta.resize(model.m);
  if (eps == 0.0) {
    out.I = I;
    for (int i = 0; i < model.m; ++i)
      out.theta[i] =
          wrap_angle(theta[i] + kTwoPi * model.f[i](I) / model.omega);
    return out;
  }
  out.I = I + eps * map.tilde_F0(I, theta);
  for (int i = 0; i < model.m; ++i)
    out.theta[i] = wrap_angle(theta[i] + kTwoPi * model.f[i](I) / model.omega +
                              eps * map.tilde_F(i + 1, I, theta));
  out.left_domain = std::abs(out.I) >= model.gamma;
  return out;
}

MapPoint direct_flow_map(const ActionAngleModel& model,
                         const PerturbationDef& pert, double I0,
                         std::span<const double> theta0, double eps,
                         double dt_fine) {
  model.validate();
  const double T = model.period();
  if (dt_fine > T / 1e4)
    throw std::invalid_argument("direct_flow_map: dt_fine too coarse");
  const int m = model.m;

  // State y = (I, theta_1..theta_m); angles are kept unreduced during the
  // integration and wrapped only at the end.
  std::vector<double> y(m + 1);
  y[0] = I0;
  for (int i = 0; i < m; ++i) y[i + 1] = theta0[i];

  auto deriv = [&](const std::vector<double>& s, double t,
                   std::vector<double>& ds) {
    std::span<const double> th(s.data() + 1, m);
    ds[0] = eps == 0.0 ? 0.0 : eps * pert.F[0](s[0], th, t);
    for (int i = 0; i < m; ++i) {
      ds[i + 1] = model.f[i](s[0]);
      if (eps != 0.0) ds[i + 1] += eps * pert.F[i + 1](s[0], th, t);
    }
  };

  const long steps = std::lround(T / dt_fine);
  const double h = T / steps;
  std::vector<double> k1(m + 1), k2(m + 1), k3(m + 1), k4(m + 1), tmp(m + 1);
  for (long k = 0; k < steps; ++k) {
    const double t = k * h;
    deriv(y, t, k1);
    for (int i = 0; i <= m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    deriv(tmp, t + 0.5 * h, k2);
    for (int i = 0; i <= m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    deriv(tmp, t + 0.5 * h, k3);
    for (int i = 0; i <= m; ++i) tmp[i] = y[i] + h * k3[i];
    deriv(tmp, t + h, k4);
    for (int i = 0; i <= m; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  MapPoint out;
  out.I = y[0];
  out.theta.resize(m);
  for (int i = 0; i < m; ++i) out.theta[i] = wrap_angle(y[i + 1]);
  out.left_domain = std::abs(out.I) >= model.gamma;
  return out;
}

double map_distance(const MapPoint& a, const MapPoint& b) {
  double s = (a.I - b.I) * (a.I - b.I);
  for (std::size_t i = 0; i < a.theta.size(); ++i) {
    double d = std::fmod(a.theta[i] - b.theta[i], kTwoPi);
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d < -std::numbers::pi) d += kTwoPi;
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace wint
