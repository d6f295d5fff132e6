#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "wint/systems.hpp"

using namespace wint;

TEST_CASE("coupling matrix is exactly skew-symmetric and traceless") {
  const auto L = benchmark_coupling(0.3);
  CHECK(L.skew_defect() == 0.0);
  CHECK(L.trace() == 0.0);
  CHECK(L.at(0, 1) == 1.0);
  CHECK(L.at(1, 0) == -1.0);
  CHECK(L.at(0, 3) == 0.3);
  CHECK(L.at(1, 2) == -0.3);
  CHECK(L.at(2, 1) == 0.3);
  CHECK(L.at(2, 3) == 1.0);
  CHECK(L.at(3, 0) == -0.3);
  CHECK(L.at(3, 2) == -1.0);
  CHECK(L.at(0, 0) == 0.0);
  CHECK(L.at(0, 2) == 0.0);
}

TEST_CASE("density is 1 + eps |u|^2") {
  BenchmarkParams p;
  p.epsilon = 0.5;
  const PhaseState u = {1.0, 2.0, 0.0, -1.0};
  CHECK(eval_density(p, u) == doctest::Approx(1.0 + 0.5 * 6.0).epsilon(1e-15));
  const PhaseState origin = {0.0, 0.0, 0.0, 0.0};
  CHECK(eval_density(p, origin) == 1.0);
}

TEST_CASE("density rejects corrupted states") {
  BenchmarkParams p;
  PhaseState u = {1.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
  CHECK_THROWS_AS(eval_density(p, u), std::invalid_argument);
}

TEST_CASE("field matches the componentwise formula") {
  BenchmarkParams p{0.5, 0.3, 0.1};
  const PhaseState u = {0.4, -0.2, 0.7, 0.1};
  const double x1 = u[0], y1 = u[1], x2 = u[2], y2 = u[3];
  const double rho = 1.0 + 0.5 * (x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2);
  const double n1 = x1 * x1 * x1 - 3.0 * x1 * y1 * y1;
  const double n2 = y1 * y1 * y1 - 3.0 * y1 * x1 * x1;
  const double n3 = x2 * x2 * x2 - 3.0 * x2 * y2 * y2;
  const double n4 = y2 * y2 * y2 - 3.0 * y2 * x2 * x2;
  std::vector<double> v(4);
  eval_benchmark_field(p, u, v);
  CHECK(v[0] == doctest::Approx(((y1 + 0.3 * y2) + 0.1 * n1) / rho).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx((-(x1 + 0.3 * x2) + 0.1 * n2) / rho).epsilon(1e-15));
  CHECK(v[2] == doctest::Approx(((0.3 * y1 + y2) + 0.1 * n3) / rho).epsilon(1e-15));
  CHECK(v[3] == doctest::Approx((-(0.3 * x1 + x2) + 0.1 * n4) / rho).epsilon(1e-15));
}

TEST_CASE("origin is a fixed point") {
  const auto sys = make_benchmark_system({0.5, 0.3, 0.3});
  std::vector<double> v(4);
  sys.field(PhaseState{0.0, 0.0, 0.0, 0.0}, v);
  for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make_benchmark_system({-1.0, 0.3, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(make_benchmark_system({0.5, 0.3, -0.1}), std::invalid_argument);
}

TEST_CASE("analytic Jacobian agrees with central finite differences") {
  const auto sys = make_benchmark_system({0.5, 0.3, 0.1}, true);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> box(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const PhaseState u = {box(rng), box(rng), box(rng), box(rng)};
    std::vector<double> ja(16);
    eval_benchmark_jacobian({0.5, 0.3, 0.1}, u, ja);
    const auto jf = jacobian_fd(sys, u, 1e-5, FdScheme::central);
    for (int k = 0; k < 16; ++k) CHECK(ja[k] == doctest::Approx(jf[k]).epsilon(1e-7));
  }
}

TEST_CASE("forward FD Jacobian error scales like h") {
  // On a cubic field the forward-difference truncation error is O(h).
  const auto sys = make_benchmark_system({0.5, 0.3, 0.1}, true);
  const PhaseState u = {0.5, -0.3, 0.7, 0.2};
  std::vector<double> exact(16);
  eval_benchmark_jacobian({0.5, 0.3, 0.1}, u, exact);
  auto err = [&](double h) {
    const auto j = jacobian_fd(sys, u, h, FdScheme::forward);
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) worst = std::max(worst, std::abs(j[k] - exact[k]));
    return worst;
  };
  CHECK(err(1e-3) / err(1e-4) == doctest::Approx(10.0).epsilon(0.15));
}

TEST_CASE("weighted divergence vanishes to FD accuracy for all alphas") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::vector<PhaseState> pts(100);
  for (auto& u : pts) u = {box(rng), box(rng), box(rng), box(rng)};
  for (double alpha : {0.0, 0.1, 0.5}) {
    const auto sys = make_benchmark_system({0.5, 0.3, alpha});
    CHECK(check_weighted_divergence(sys, pts, 1e-5) <= 1e-8);
  }
}

TEST_CASE("divergence check flags a non-multiplier density") {
  // Same field, but paired with the wrong density: div(rho V) != 0.
  auto sys = make_benchmark_system({0.5, 0.3, 0.1});
  sys.density = [](std::span<const double> u) { return 1.0 + u[0] * u[0]; };
  std::vector<PhaseState> pts = {{0.5, 0.2, -0.3, 0.8}};
  CHECK(check_weighted_divergence(sys, pts, 1e-5) > 1e-3);
}
