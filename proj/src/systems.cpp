#include "wint/systems.hpp"

#include <cmath>
#include <stdexcept>

#include "wint/util.hpp"

namespace wint {

double CouplingMatrix::skew_defect() const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      worst = std::max(worst, std::abs(at(i, j) + at(j, i)));
  return worst;
}

double CouplingMatrix::trace() const {
  return at(0, 0) + at(1, 1) + at(2, 2) + at(3, 3);
}

void CouplingMatrix::apply(std::span<const double> u, std::span<double> y) const {
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += at(i, j) * u[j];
    y[i] = s;
  }
}

CouplingMatrix benchmark_coupling(double delta) {
  CouplingMatrix L;
  const double d = delta;
  L.entries = {0.0, 1.0, 0.0, d,     //
               -1.0, 0.0, -d, 0.0,   //
               0.0, d, 0.0, 1.0,     //
               -d, 0.0, -1.0, 0.0};
  if (L.skew_defect() != 0.0 || L.trace() != 0.0)
    throw std::logic_error("benchmark_coupling: matrix not skew-symmetric");
  return L;
}

static void require_state4(std::span<const double> u, const char* who) {
  if (u.size() != 4)
    throw std::invalid_argument(std::string(who) + ": state must have length 4");
  if (!all_finite(u))
    throw std::invalid_argument(std::string(who) + ": non-finite state");
}

double eval_density(const BenchmarkParams& p, std::span<const double> u) {
  require_state4(u, "eval_density");
  return 1.0 + p.epsilon * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
}

static void cubic_term(std::span<const double> u, std::span<double> n) {
  const double x1 = u[0], y1 = u[1], x2 = u[2], y2 = u[3];
  n[0] = x1 * x1 * x1 - 3.0 * x1 * y1 * y1;
  n[1] = y1 * y1 * y1 - 3.0 * y1 * x1 * x1;
  n[2] = x2 * x2 * x2 - 3.0 * x2 * y2 * y2;
  n[3] = y2 * y2 * y2 - 3.0 * y2 * x2 * x2;
}

void eval_benchmark_field(const BenchmarkParams& p, std::span<const double> u,
                          std::span<double> out) {
  require_state4(u, "eval_benchmark_field");
  const double x1 = u[0], y1 = u[1], x2 = u[2], y2 = u[3];
  const double rho =
      1.0 + p.epsilon * (x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2);
  double n[4];
  cubic_term(u, n);
  const double d = p.delta, a = p.alpha;
  out[0] = ((y1 + d * y2) + a * n[0]) / rho;
  out[1] = (-(x1 + d * x2) + a * n[1]) / rho;
  out[2] = ((d * y1 + y2) + a * n[2]) / rho;
  out[3] = (-(d * x1 + x2) + a * n[3]) / rho;
}

void eval_benchmark_jacobian(const BenchmarkParams& p,
                             std::span<const double> u, std::span<double> jac) {
  require_state4(u, "eval_benchmark_jacobian");
  const double x1 = u[0], y1 = u[1], x2 = u[2], y2 = u[3];
  const double eps = p.epsilon, d = p.delta, a = p.alpha;
  const double rho = 1.0 + eps * (x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2);

  // G(u) = L u + alpha N(u); V = G / rho
  double n[4];
  cubic_term(u, n);
  const double g[4] = {(y1 + d * y2) + a * n[0], -(x1 + d * x2) + a * n[1],
                       (d * y1 + y2) + a * n[2], -(d * x1 + x2) + a * n[3]};

  // DG = L + alpha DN, with DN block diagonal.
  double dg[16] = {0.0, 1.0, 0.0, d,    //
                   -1.0, 0.0, -d, 0.0,  //
                   0.0, d, 0.0, 1.0,    //
                   -d, 0.0, -1.0, 0.0};
  dg[0] += a * 3.0 * (x1 * x1 - y1 * y1);
  dg[1] += a * (-6.0 * x1 * y1);
  dg[4] += a * (-6.0 * x1 * y1);
  dg[5] += a * 3.0 * (y1 * y1 - x1 * x1);
  dg[10] += a * 3.0 * (x2 * x2 - y2 * y2);
  dg[11] += a * (-6.0 * x2 * y2);
  dg[14] += a * (-6.0 * x2 * y2);
  dg[15] += a * 3.0 * (y2 * y2 - x2 * x2);

  // D(G/rho) = DG/rho - G (grad rho)^T / rho^2, grad rho = 2 eps u.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      jac[4 * i + j] = dg[4 * i + j] / rho -
                       g[i] * 2.0 * eps * u[j] / (rho * rho);
}

SystemDef make_benchmark_system(const BenchmarkParams& p,
                                bool with_analytic_jacobian) {
  if (p.epsilon < 0.0)
    throw std::invalid_argument("benchmark: epsilon must be >= 0");
  if (p.alpha < 0.0)
    throw std::invalid_argument("benchmark: alpha must be >= 0");
  benchmark_coupling(p.delta);  // construction-time skew-symmetry assertion

  SystemDef sys;
  sys.dimension = 4;
  sys.name = "weighted-benchmark";
  sys.params = {{"epsilon", p.epsilon}, {"delta", p.delta}, {"alpha", p.alpha}};
  sys.field = [p](std::span<const double> u, std::span<double> out) {
    eval_benchmark_field(p, u, out);
  };
  sys.density = [p](std::span<const double> u) { return eval_density(p, u); };
  if (with_analytic_jacobian)
    sys.analytic_jacobian = [p](std::span<const double> u,
                                std::span<double> jac) {
      eval_benchmark_jacobian(p, u, jac);
    };
  return sys;
}

void jacobian_fd(const SystemDef& system, std::span<const double> u, double h,
                 FdScheme scheme, std::span<double> jac) {
  const int n = system.dimension;
  if (h <= 0.0) throw std::invalid_argument("jacobian_fd: h must be > 0");
  std::vector<double> up(u.begin(), u.end());
  std::vector<double> fp(n), fm(n);

  if (scheme == FdScheme::forward) {
    std::vector<double> f0(n);
    system.field(u, f0);
    if (!all_finite(f0))
      throw std::invalid_argument("jacobian_fd: non-finite field value");
    for (int j = 0; j < n; ++j) {
      up[j] = u[j] + h;
      system.field(up, fp);
      up[j] = u[j];
      for (int i = 0; i < n; ++i) jac[n * i + j] = (fp[i] - f0[i]) / h;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      up[j] = u[j] + h;
      system.field(up, fp);
      up[j] = u[j] - h;
      system.field(up, fm);
      up[j] = u[j];
      for (int i = 0; i < n; ++i) jac[n * i + j] = (fp[i] - fm[i]) / (2.0 * h);
    }
  }
  if (!all_finite(jac))
    throw std::invalid_argument("jacobian_fd: non-finite field value");
}

std::vector<double> jacobian_fd(const SystemDef& system, const PhaseState& u,
                                double h, FdScheme scheme) {
  std::vector<double> jac(static_cast<std::size_t>(system.dimension) *
                          system.dimension);
  jacobian_fd(system, u, h, scheme, jac);
  return jac;
}

double check_weighted_divergence(const SystemDef& system,
                                 const std::vector<PhaseState>& samples,
                                 double h) {
  if (h <= 0.0)
    throw std::invalid_argument("check_weighted_divergence: h must be > 0");
  const int n = system.dimension;
  std::vector<double> up, fp(n), fm(n);
  double worst = 0.0;
  for (const auto& u : samples) {
    up.assign(u.begin(), u.end());
    double div = 0.0;
    for (int i = 0; i < n; ++i) {
      up[i] = u[i] + h;
      system.field(up, fp);
      const double gp = system.density(up) * fp[i];
      up[i] = u[i] - h;
      system.field(up, fm);
      const double gm = system.density(up) * fm[i];
      up[i] = u[i];
      div += (gp - gm) / (2.0 * h);
    }
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

}  // namespace wint
