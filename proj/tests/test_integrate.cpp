#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wint/integrate.hpp"
#include "wint/systems.hpp"
#include "wint/util.hpp"

using namespace wint;

namespace {

SystemDef linear_diagonal(double rate) {
  SystemDef sys;
  sys.dimension = 2;
  sys.name = "linear";
  sys.field = [rate](std::span<const double> u, std::span<double> v) {
    v[0] = rate * u[0];
    v[1] = rate * u[1];
  };
  sys.density = [](std::span<const double>) { return 1.0; };
  return sys;
}

}  // namespace

TEST_CASE("fixed point stays fixed") {
  const auto sys = make_benchmark_system({0.5, 0.3, 0.3});
  IntegrationConfig cfg;
  cfg.t_max = 1.0;
  const auto res = integrate_flow(sys, {0.0, 0.0, 0.0, 0.0}, cfg);
  CHECK(!res.escape);
  for (const auto& s : res.trajectory.states)
    for (double x : s) CHECK(x == 0.0);
}

TEST_CASE("trajectory timestamps advance by dt") {
  const auto sys = make_benchmark_system({0.5, 0.3, 0.0});
  IntegrationConfig cfg;
  cfg.t_max = 0.5;
  const auto res = integrate_flow(sys, {0.3, 0.0, 0.1, 0.0}, cfg);
  const auto& t = res.trajectory.times;
  REQUIRE(t.size() == 51);
  for (std::size_t k = 1; k < t.size(); ++k)
    CHECK(t[k] - t[k - 1] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("Euler amplification on a pure rotation matches the closed form") {
  // Decoupled unit rotation: each Euler step multiplies the radius by
  // sqrt(1 + dt^2).
  const auto sys = make_benchmark_system({0.0, 0.0, 0.0});
  IntegrationConfig cfg;
  cfg.dt = 0.001;
  cfg.t_max = 10.0;
  const auto res = integrate_flow(sys, {1.0, 0.0, 0.0, 0.0}, cfg);
  CHECK(!res.escape);
  const double r = norm2(res.trajectory.states.back());
  const double expected = std::pow(1.0 + cfg.dt * cfg.dt, cfg.steps() / 2.0);
  CHECK(r == doctest::Approx(expected).epsilon(1e-6));
  CHECK(r == doctest::Approx(1.005).epsilon(1e-4));
}

TEST_CASE("RK4 preserves the rotation radius") {
  const auto sys = make_benchmark_system({0.0, 0.0, 0.0});
  IntegrationConfig cfg;
  cfg.method = Method::rk4;
  cfg.t_max = 10.0;
  const auto res = integrate_flow(sys, {1.0, 0.0, 0.0, 0.0}, cfg);
  CHECK(!res.escape);
  CHECK(std::abs(norm2(res.trajectory.states.back()) - 1.0) <= 1e-8);
}

TEST_CASE("escape is reported with time and state") {
  const auto sys = linear_diagonal(1.0);
  IntegrationConfig cfg;
  cfg.t_max = 10.0;
  const auto res = integrate_flow(sys, {1.0, 0.0}, cfg);
  REQUIRE(res.escape);
  CHECK(res.escape->time == doctest::Approx(std::log(10.0)).epsilon(0.05));
  CHECK(norm2(res.escape->state) >= 10.0);
}

TEST_CASE("non-finite initial state is rejected") {
  const auto sys = make_benchmark_system({0.5, 0.3, 0.1});
  IntegrationConfig cfg;
  CHECK_THROWS_AS(integrate_flow(sys, {std::nan(""), 0.0, 0.0, 0.0}, cfg),
                  std::invalid_argument);
}

TEST_CASE("contracting flow has exponent -1") {
  const auto sys = linear_diagonal(-1.0);
  IntegrationConfig cfg;
  cfg.t_max = 50.0;
  const auto res = ftle_max(sys, {1.0, 0.5}, cfg, {1.0, 0.0});
  CHECK(!res.escaped);
  CHECK(std::abs(res.lambda - (-1.0)) <= cfg.dt);
}

TEST_CASE("Euler exponent bias at the benchmark fixed point") {
  // Tangent map at the origin is I + dt L with eigenvalue moduli
  // sqrt(1 + dt^2 (1 +- delta)^2); the leading exponent is dt (1+delta)^2 / 2.
  const auto sys = make_benchmark_system({0.5, 0.3, 0.1});
  IntegrationConfig cfg;
  cfg.t_max = 200.0;
  const auto res = ftle_max(sys, {0.0, 0.0, 0.0, 0.0}, cfg);
  const double bias = 0.5 * cfg.dt * 1.3 * 1.3;  // 0.00845
  CHECK(!res.escaped);
  CHECK(res.lambda == doctest::Approx(bias).epsilon(0.10));
}

TEST_CASE("renormalization cadence does not change the exponent") {
  const auto sys = make_benchmark_system({0.5, 0.3, 0.1});
  IntegrationConfig c1, c10;
  c1.t_max = c10.t_max = 50.0;
  c1.renorm_every = 1;
  c10.renorm_every = 10;
  const PhaseState u0 = {0.5, 0.5, 0.7, 0.0};
  const double l1 = ftle_max(sys, u0, c1).lambda;
  const double l10 = ftle_max(sys, u0, c10).lambda;
  CHECK(std::abs(l1 - l10) <= 1e-12);
}

TEST_CASE("exponent is deterministic and seed-reproducible") {
  const auto sys = make_benchmark_system({0.5, 0.3, 0.1});
  IntegrationConfig cfg;
  cfg.t_max = 20.0;
  const PhaseState u0 = {0.5, 0.5, 0.7, 0.0};
  CHECK(ftle_max(sys, u0, cfg).lambda == ftle_max(sys, u0, cfg).lambda);
  const auto a = ftle_max_averaged(sys, u0, cfg, 4, 42);
  const auto b = ftle_max_averaged(sys, u0, cfg, 4, 42);
  CHECK(a.lambda == b.lambda);
  const auto c = ftle_max_averaged(sys, u0, cfg, 4, 43);
  CHECK(a.lambda != c.lambda);
}

TEST_CASE("analytic and FD Jacobian paths give nearby exponents") {
  IntegrationConfig cfg;
  cfg.t_max = 50.0;
  const PhaseState u0 = {0.5, 0.5, 0.7, 0.0};
  const double l_fd =
      ftle_max(make_benchmark_system({0.5, 0.3, 0.1}), u0, cfg).lambda;
  const double l_an =
      ftle_max(make_benchmark_system({0.5, 0.3, 0.1}, true), u0, cfg).lambda;
  CHECK(std::abs(l_fd - l_an) <= 1e-5);
}

TEST_CASE("escaped orbit still reports the pre-escape exponent") {
  const auto sys = linear_diagonal(0.5);
  IntegrationConfig cfg;
  cfg.t_max = 100.0;
  const auto res = ftle_max(sys, {1.0, 0.0}, cfg, {1.0, 0.0});
  CHECK(res.escaped);
  CHECK(res.time < 100.0);
  CHECK(res.lambda == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("trajectory CSV layout") {
  const auto sys = make_benchmark_system({0.5, 0.3, 0.0});
  IntegrationConfig cfg;
  cfg.t_max = 0.1;
  const auto res = integrate_flow(sys, {0.3, 0.0, 0.1, 0.0}, cfg);
  const std::string csv = trajectory_csv(res.trajectory, {{"alpha", 0.0}});
  CHECK(csv.find("# alpha=0\n") != std::string::npos);
  CHECK(csv.find("t,x1,y1,x2,y2\n") != std::string::npos);
}

TEST_CASE("config validation") {
  IntegrationConfig cfg;
  cfg.dt = -0.01;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.dt = 0.01;
  cfg.renorm_every = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
