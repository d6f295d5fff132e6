#include "wint/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wint {

namespace {

double central_stencil(const std::function<double(double)>& fn, double x,
                       int k, double h) {
  switch (k) {
    case 1:
      return (fn(x + h) - fn(x - h)) / (2.0 * h);
    case 2:
      return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
    case 3:
      return (fn(x + 2.0 * h) - 2.0 * fn(x + h) + 2.0 * fn(x - h) -
              fn(x - 2.0 * h)) /
             (2.0 * h * h * h);
    case 4:
      return (fn(x + 2.0 * h) - 4.0 * fn(x + h) + 6.0 * fn(x) -
              4.0 * fn(x - h) + fn(x - 2.0 * h)) /
             (h * h * h * h);
    default:
      throw std::invalid_argument(
          "nth_derivative_fd: derivative order > 4 needs analytic derivatives");
  }
}

}  // namespace

double nth_derivative_fd(const std::function<double(double)>& fn, double x,
                         int k, double base_h) {
  if (k == 0) return fn(x);
  if (k < 0) throw std::invalid_argument("nth_derivative_fd: negative order");
  double h = base_h;
  if (k >= 3) {
    // Wider step keeps the high-order stencil above rounding noise.
    const double eps = std::numeric_limits<double>::epsilon();
    h = std::max(base_h, std::pow(eps, 1.0 / (k + 2)));
  }
  const double d1 = central_stencil(fn, x, k, h);
  const double d2 = central_stencil(fn, x, k, 0.5 * h);
  return (4.0 * d2 - d1) / 3.0;  // stencils are O(h^2)
}

namespace {

double derivative_of(const DerivedFn& f, double I, int order) {
  if (order == 0) return f.value(I);
  if (order <= static_cast<int>(f.derivs.size())) return f.derivs[order - 1](I);
  return nth_derivative_fd(f.value, I, order);
}

double det_inplace(std::vector<double>& a, int n) {
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[n * r + c]) > std::abs(a[n * piv + c])) piv = r;
    if (a[n * piv + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a[n * piv + j], a[n * c + j]);
      det = -det;
    }
    det *= a[n * c + c];
    for (int r = c + 1; r < n; ++r) {
      const double factor = a[n * r + c] / a[n * c + c];
      for (int j = c; j < n; ++j) a[n * r + j] -= factor * a[n * c + j];
    }
  }
  return det;
}

}  // namespace

double wronskian_det(const std::vector<DerivedFn>& f, double I,
                     bool first_derivative_rows) {
  const int n = static_cast<int>(f.size());
  if (n == 0) throw std::invalid_argument("wronskian_det: no functions");
  const int start = first_derivative_rows ? 1 : 0;
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) a[n * r + j] = derivative_of(f[j], I, start + r);
  return det_inplace(a, n);
}

NondegeneracyResult check_nondegeneracy(const std::vector<DerivedFn>& f,
                                        double lo, double hi, int grid_count,
                                        double tau,
                                        bool first_derivative_rows) {
  if (grid_count < 100)
    throw std::invalid_argument("check_nondegeneracy: grid_count must be >= 100");
  if (hi <= lo) throw std::invalid_argument("check_nondegeneracy: bad interval");
  NondegeneracyResult out;
  out.min_abs_det = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_count; ++k) {
    const double I = lo + (hi - lo) * k / (grid_count - 1);
    const double d = std::abs(wronskian_det(f, I, first_derivative_rows));
    if (d < out.min_abs_det) {
      out.min_abs_det = d;
      out.argmin = I;
    }
  }
  out.pass = out.min_abs_det >= tau;
  return out;
}

ResonanceResult resonance_min(const std::vector<double>& omega, int max_order) {
  if (max_order < 1)
    throw std::invalid_argument("resonance_min: max_order must be >= 1");
  if (omega.empty()) throw std::invalid_argument("resonance_min: empty omega");
  const int m = static_cast<int>(omega.size());

  ResonanceResult best;
  best.min_abs = std::numeric_limits<double>::infinity();

  std::vector<int> p(m, -max_order);
  for (;;) {
    bool zero = true;
    for (int x : p)
      if (x != 0) {
        zero = false;
        break;
      }
    if (!zero) {
      double dot = 0.0;
      for (int i = 0; i < m; ++i) dot += p[i] * omega[i];
      if (std::abs(dot) < best.min_abs) {
        best.min_abs = std::abs(dot);
        best.p = p;
      }
    }
    int i = m - 1;
    while (i >= 0 && p[i] == max_order) p[i--] = -max_order;
    if (i < 0) break;
    ++p[i];
  }
  return best;
}

FourierTable fourier_coeffs(const std::function<double(double)>& g, int max_j,
                            int nodes) {
  if (max_j < 0) throw std::invalid_argument("fourier_coeffs: max_j < 0");
  if (nodes < 4 || (nodes & (nodes - 1)) != 0)
    throw std::invalid_argument("fourier_coeffs: nodes must be a power of two");
  if (nodes < 4 * max_j)
    throw std::invalid_argument("fourier_coeffs: need nodes >= 4*max_j");

  std::vector<double> samples(nodes);
  const double step = 2.0 * std::numbers::pi / nodes;
  for (int k = 0; k < nodes; ++k) samples[k] = g(k * step);

  FourierTable table;
  table.max_j = max_j;
  table.c.resize(2 * max_j + 1);
  for (int j = -max_j; j <= max_j; ++j) {
    std::complex<double> s = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double phase = -j * k * step;
      s += samples[k] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    table.c[j + max_j] = s / static_cast<double>(nodes);
  }

  if (max_j > 0) {
    double peak = 0.0;
    for (const auto& c : table.c) peak = std::max(peak, std::abs(c));
    const double edge =
        std::max(std::abs(table.coeff(max_j)), std::abs(table.coeff(-max_j)));
    table.truncation_warning = edge > 1e-6 * peak;
  }
  return table;
}

NonpersistenceReport nonpersistence_conditions(
    const NonpersistenceModel& model,
    const std::vector<std::vector<double>>& manifold_samples, int max_j,
    int nodes, double threshold, double tol_f) {
  if (manifold_samples.empty())
    throw std::invalid_argument("nonpersistence: empty sample set");
  if (max_j < 1) throw std::invalid_argument("nonpersistence: max_j must be >= 1");
  const int l = static_cast<int>(manifold_samples.front().size());
  if (static_cast<int>(model.g.size()) != l)
    throw std::invalid_argument("nonpersistence: need one g per action");
  for (const auto& s : manifold_samples)
    if (std::abs(model.F0(s)) > 1e-8)
      throw std::invalid_argument(
          "nonpersistence: sample not on the manifold {F0 = 0}");

  NonpersistenceReport report;
  report.max_j = max_j;
  report.harmonic_cap = nodes / 4;
  const int cap = report.harmonic_cap;

  // dot[s][k] = |sum_i ghat_i^k(I_s) dF0/dI_i(I_s)| for k = 0..cap.
  std::vector<std::vector<double>> dots(manifold_samples.size());
  for (std::size_t s = 0; s < manifold_samples.size(); ++s) {
    const auto& I = manifold_samples[s];
    const auto grad = model.grad_F0(I);
    std::vector<FourierTable> tables;
    tables.reserve(l);
    for (int i = 0; i < l; ++i)
      tables.push_back(fourier_coeffs(
          [&, i](double theta) { return model.g[i](I, theta); }, cap, nodes));
    dots[s].resize(cap + 1);
    for (int k = 0; k <= cap; ++k) {
      std::complex<double> d = 0.0;
      for (int i = 0; i < l; ++i) d += tables[i].coeff(k) * grad[i];
      dots[s][k] = std::abs(d);
    }
  }

  report.cond1_min = std::numeric_limits<double>::infinity();
  for (const auto& d : dots) report.cond1_min = std::min(report.cond1_min, d[0]);
  if (report.cond1_min > threshold) {
    report.verdict = NonpersistenceVerdict::condition1;
    return report;
  }

  for (const auto& I : manifold_samples)
    if (std::abs(model.f(I)) <= tol_f) {
      report.freq_vanishes = true;
      break;
    }

  bool all_j_covered = true;
  for (int j = 1; j <= max_j; ++j) {
    double best = 0.0;
    for (int k = j; k <= cap; k += j) {
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& d : dots) worst = std::min(worst, d[k]);
      best = std::max(best, worst);
    }
    report.per_j_min.emplace_back(j, best);
    if (best <= threshold) all_j_covered = false;
  }

  report.verdict = (report.freq_vanishes && all_j_covered)
                       ? NonpersistenceVerdict::condition2
                       : NonpersistenceVerdict::inconclusive;
  return report;
}

std::vector<std::vector<double>> graph_manifold_samples(
    const std::function<double(std::span<const double>)>& h,
    const std::vector<std::pair<double, double>>& ranges, int count) {
  if (count < 1)
    throw std::invalid_argument("graph_manifold_samples: count must be >= 1");
  const int rest = static_cast<int>(ranges.size());
  std::vector<std::vector<double>> samples;

  std::vector<int> idx(rest, 0);
  for (;;) {
    std::vector<double> tail(rest);
    for (int i = 0; i < rest; ++i) {
      const auto& [lo, hi] = ranges[i];
      tail[i] = count == 1 ? 0.5 * (lo + hi)
                           : lo + (hi - lo) * idx[i] / (count - 1);
    }
    std::vector<double> sample;
    sample.reserve(rest + 1);
    sample.push_back(h(tail));
    sample.insert(sample.end(), tail.begin(), tail.end());
    samples.push_back(std::move(sample));

    int i = rest - 1;
    while (i >= 0 && idx[i] == count - 1) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
  return samples;
}

}  // namespace wint
