#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "wint/poincare.hpp"

using namespace wint;
using std::numbers::pi;

namespace {

// One action, one angle: thetadot = I, forced with omega = 1,
// perturbation F_0 = sin(theta), F_1 = 0.
ActionAngleModel sine_model() {
  ActionAngleModel m;
  m.m = 1;
  m.f = {[](double I) { return I; }};
  m.df = {[](double) { return 1.0; }};
  m.omega = 1.0;
  m.gamma = 1.0;
  return m;
}

PerturbationDef sine_pert() {
  PerturbationDef p;
  p.F = {[](double, std::span<const double> th, double) { return std::sin(th[0]); },
         [](double, std::span<const double>, double) { return 0.0; }};
  return p;
}

}  // namespace

TEST_CASE("closed-form averaged perturbation at I = 1/2, theta = 0") {
  // int_0^{2pi} sin(t/2) dt = 4; the angle shift adds the double integral
  // int_0^{2pi} 2 (1 - cos(t/2)) dt = 4 pi.
  const auto map = build_first_order_map(sine_model(), sine_pert(), 512);
  const std::vector<double> th0 = {0.0};
  CHECK(std::abs(map.tilde_F0(0.5, th0) - 4.0) <= 1e-9);
  CHECK(std::abs(map.tilde_F(1, 0.5, th0) - 4.0 * pi) <= 1e-8);
}

TEST_CASE("unperturbed branch is exact") {
  const auto map = build_first_order_map(sine_model(), sine_pert(), 256);
  const std::vector<double> th0 = {1.0};
  const auto out = apply_map(map, 0.25, th0, 0.0);
  CHECK(out.I == 0.25);
  CHECK(out.theta[0] == doctest::Approx(wrap_angle(1.0 + 2.0 * pi * 0.25))
                            .epsilon(1e-15));
  CHECK(!out.left_domain);
}

TEST_CASE("map error against the direct flow is second order in eps") {
  const auto model = sine_model();
  const auto pert = sine_pert();
  const auto map = build_first_order_map(model, pert, 512);
  const std::vector<double> th0 = {0.0};
  const double dt_fine = model.period() / 1e5;

  std::vector<double> errs;
  for (double eps : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const auto a = apply_map(map, 0.5, th0, eps);
    const auto b = direct_flow_map(model, pert, 0.5, th0, eps, dt_fine);
    errs.push_back(map_distance(a, b));
  }
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    const double ratio = errs[k] / errs[k + 1];
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
}

TEST_CASE("angle input is treated mod 2 pi") {
  const auto map = build_first_order_map(sine_model(), sine_pert(), 256);
  const std::vector<double> a = {1.2}, b = {1.2 + 2.0 * pi};
  CHECK(std::abs(map.tilde_F0(0.3, a) - map.tilde_F0(0.3, b)) <= 1e-12);
  CHECK(std::abs(map.tilde_F(1, 0.3, a) - map.tilde_F(1, 0.3, b)) <= 1e-12);
}

TEST_CASE("non-periodic perturbations are rejected") {
  PerturbationDef bad;
  bad.F = {[](double, std::span<const double> th, double) { return th[0]; },
           [](double, std::span<const double>, double) { return 0.0; }};
  CHECK_THROWS_AS(build_first_order_map(sine_model(), bad, 128),
                  std::invalid_argument);

  PerturbationDef bad_t;
  bad_t.F = {[](double, std::span<const double>, double t) { return t; },
             [](double, std::span<const double>, double) { return 0.0; }};
  CHECK_THROWS_AS(build_first_order_map(sine_model(), bad_t, 128),
                  std::invalid_argument);
}

TEST_CASE("quadrature non-convergence is a runtime failure") {
  // A kink at theta = pi keeps Simpson refinement moving at 1e-8 scale.
  PerturbationDef rough;
  rough.F = {[](double, std::span<const double> th, double) {
               return std::abs(std::sin(0.5 * th[0]));
             },
             [](double, std::span<const double>, double) { return 0.0; }};
  CHECK_THROWS_AS(build_first_order_map(sine_model(), rough, 64),
                  std::runtime_error);
}

TEST_CASE("domain handling") {
  const auto map = build_first_order_map(sine_model(), sine_pert(), 256);
  const std::vector<double> th0 = {0.0};
  CHECK_THROWS_AS(apply_map(map, 1.0, th0, 0.01), std::invalid_argument);
  const auto near_edge = apply_map(map, 0.999, th0, 0.5);
  CHECK(near_edge.left_domain == (std::abs(near_edge.I) >= 1.0));
}

TEST_CASE("model validation") {
  auto m = sine_model();
  m.omega = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = sine_model();
  m.f = {[](double) { return 0.0; }};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  // Isolated zero of the frequency (a resonant circle) is allowed.
  m = sine_model();
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("map distance wraps angle differences") {
  MapPoint a, b;
  a.I = b.I = 0.0;
  a.theta = {0.05};
  b.theta = {2.0 * pi - 0.05};
  CHECK(map_distance(a, b) == doctest::Approx(0.1).epsilon(1e-12));
}
