#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wint {

/// Compensated (Kahan) accumulator. Used for all weighted reductions so the
/// result does not depend on how the work was split across threads.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Shortest-precision round-trip decimal formatting (17 significant digits).
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Runs fn(i) for i in [0, n) on `workers` threads. Each index writes only
/// its own slot in the caller's output, so results are order-independent;
/// any reduction must happen afterwards in a fixed index order.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace wint
