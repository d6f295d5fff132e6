#pragma once

#include <functional>
#include <span>
#include <vector>

namespace wint {

/// Composite Simpson rule over equally spaced samples f[0..n], n even,
/// spacing h. Returns the integral over the whole grid.
double simpson(std::span<const double> f, double h);

/// Cumulative integral C[k] = int_{t0}^{tk} f dt on the same node grid,
/// fourth-order accurate. Even nodes use the composite Simpson increment,
/// odd nodes the half-panel Newton-Cotes formula
///   int_{t2k}^{t2k+1} f ~= h/12 (5 f_{2k} + 8 f_{2k+1} - f_{2k+2}).
/// Requires an even panel count (f.size() odd).
std::vector<double> cumulative_simpson(std::span<const double> f, double h);

/// Composite Simpson of fn over [a, b] with n panels (n even).
double integrate_simpson(const std::function<double(double)>& fn, double a,
                         double b, int n);

}  // namespace wint
