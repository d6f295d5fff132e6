#include "wint/quadrature.hpp"

#include <stdexcept>

namespace wint {

double simpson(std::span<const double> f, double h) {
  const std::size_t m = f.size();
  if (m < 3 || m % 2 == 0)
    throw std::invalid_argument("simpson: need an even number of panels");
  double s = f[0] + f[m - 1];
  double s4 = 0.0, s2 = 0.0;
  for (std::size_t k = 1; k < m - 1; k += 2) s4 += f[k];
  for (std::size_t k = 2; k < m - 1; k += 2) s2 += f[k];
  return h / 3.0 * (s + 4.0 * s4 + 2.0 * s2);
}

std::vector<double> cumulative_simpson(std::span<const double> f, double h) {
  const std::size_t m = f.size();
  if (m < 3 || m % 2 == 0)
    throw std::invalid_argument(
        "cumulative_simpson: need an even number of panels");
  std::vector<double> c(m, 0.0);
  for (std::size_t k = 0; k + 2 < m; k += 2) {
    c[k + 1] = c[k] + h / 12.0 * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]);
    c[k + 2] = c[k] + h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
  }
  return c;
}

double integrate_simpson(const std::function<double(double)>& fn, double a,
                         double b, int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("integrate_simpson: n must be even, >= 2");
  const double h = (b - a) / n;
  std::vector<double> f(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) f[k] = fn(a + k * h);
  return simpson(f, h);
}

}  // namespace wint
