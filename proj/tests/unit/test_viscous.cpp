#include <doctest.h>

#include <cmath>

#include "kkd/analysis.hpp"
#include "kkd/error.hpp"
#include "kkd/viscous.hpp"
#include "support.hpp"

using namespace kkd;
using kkd::testing::kTwoPi;

TEST_CASE("heat kernel variance grows by 2 eps t") {
  const double eps = 0.01, s0 = 0.1;
  const Grid1D g(-2.0, 2.0, 1024, Boundary::Outflow);
  auto gauss = [&](double x) { return std::exp(-x * x / (2 * s0 * s0)); };
  const auto init = StateField::sample(g, gauss, [](double) { return 0.0; });
  ViscousConfig cfg;
  cfg.eps = eps;
  cfg.base.t_end = 1.0;
  const auto f = simulate_viscous(init, PhiModel::constant(0.0), {0.0, 0.0}, cfg).back();
  double mass = 0.0, second = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    mass += f.u[i];
    second += f.u[i] * f.grid.center(i) * f.grid.center(i);
  }
  const double var = second / mass;
  CHECK(var == doctest::Approx(s0 * s0 + 2 * eps * 1.0).epsilon(0.02));
}

TEST_CASE("eps = 0 is bit-identical to the hyperbolic path") {
  const auto phi = PhiModel::power(1.0);
  const Grid1D g(0.0, kTwoPi, 128, Boundary::Periodic);
  const auto init = StateField::sample(g, [](double x) { return 0.2 + 0.1 * std::sin(x); },
                                       [](double x) { return 0.1 + 0.05 * std::cos(x); });
  SolverConfig base;
  base.t_end = 1.0;
  base.output_times = {0.5, 1.0};
  const ViscousConfig vcfg{base, 0.0, 0.4};
  const auto a = simulate(init, phi, {0.3, 0.1}, base);
  const auto b = simulate_viscous(init, phi, {0.3, 0.1}, vcfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].u == b[k].u);
    CHECK(a[k].v == b[k].v);
    CHECK(a[k].t == b[k].t);
  }
  // one step too
  const double dt = 0.4 * g.dx() / max_wavespeed(init, phi);
  const auto s1 = viscous_step(init, phi, {0.3, 0.1}, vcfg, dt);
  auto s2 = damping_substep(init, {0.3, 0.1}, 0.5 * dt);
  s2 = damping_substep(hyperbolic_substep(s2, phi, dt), {0.3, 0.1}, 0.5 * dt);
  CHECK(s1.u == s2.u);
  CHECK(s1.v == s2.v);
}

TEST_CASE("constant field is a fixed point without damping") {
  const Grid1D g(0.0, 1.0, 64, Boundary::Periodic);
  const auto init = StateField::sample(g, [](double) { return 0.7; }, [](double) { return 0.2; });
  ViscousConfig cfg;
  cfg.eps = 0.05;
  cfg.base.t_end = 0.5;
  const auto f = simulate_viscous(init, PhiModel::power(1.0), {0.0, 0.0}, cfg).back();
  for (int i = 0; i < f.size(); ++i) {
    CHECK(f.u[i] == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(f.v[i] == doctest::Approx(0.2).epsilon(1e-13));
  }
}

TEST_CASE("stability violations") {
  const Grid1D g(0.0, 1.0, 64, Boundary::Periodic);
  const auto init = StateField::sample(g, [](double x) { return std::sin(kTwoPi * x); }, [](double) { return 0.0; });
  ViscousConfig cfg;
  cfg.eps = 1.0;
  try {
    viscous_step(init, PhiModel::constant(1.0), {0.0, 0.0}, cfg, g.dx() * g.dx());
    FAIL("expected StabilityViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StabilityViolation);
  }
  cfg.diffusion_number = 0.7;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.diffusion_number = 0.4;
  cfg.eps = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("sweep examples") {
  const auto phi = PhiModel::power(1.0);
  const Grid1D g(0.0, kTwoPi, 256, Boundary::Periodic);
  const double c = std::sqrt(0.5);
  const auto init = StateField::sample(g, [&](double x) { return c * (0.1 + 0.05 * std::sin(x)); },
                                       [&](double x) { return c * (0.1 + 0.05 * std::sin(x)); });
  SolverConfig base;
  base.t_end = 1.0;
  const std::vector<double> eps = {0.1, 0.05, 0.025};
  const auto rows = vanishing_viscosity_sweep(init, phi, {0.2, 0.2}, base, eps);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].distance < rows[0].distance);
  CHECK(rows[2].distance < rows[1].distance);

  const std::vector<double> zero = {0.0};
  CHECK(vanishing_viscosity_sweep(init, phi, {0.2, 0.2}, base, zero)[0].distance == 0.0);

  const std::vector<double> unsorted = {0.01, 0.1};
  CHECK_THROWS_AS(vanishing_viscosity_sweep(init, phi, {0.2, 0.2}, base, unsorted), Error);
}

TEST_CASE("sweep against an exact reference in the constant channel") {
  const Grid1D g(0.0, kTwoPi, 512, Boundary::Periodic);
  const auto init = StateField::sample(g, [](double x) { return std::sin(x); }, [](double) { return 0.0; });
  const auto exact = StateField::sample(
      g, [](double x) { return exact_scalar_solution([](double y) { return std::sin(y); }, 1.0, 0.5, x, 1.0); },
      [](double) { return 0.0; });
  SolverConfig base;
  base.t_end = 1.0;
  const std::vector<double> eps = {0.2, 0.1, 0.05};
  const auto rows = vanishing_viscosity_sweep(init, PhiModel::constant(1.0), {0.5, 0.5}, base, eps, 0.4, exact);
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(std::log(r.eps));
    y.push_back(std::log(r.distance));
  }
  CHECK(fit_line(x, y).first == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("property: viscous runs keep the max bound and L2 decay") {
  const auto phi = PhiModel::power(1.0);
  const Grid1D g(0.0, kTwoPi, 256, Boundary::Periodic);
  for (double eps : {0.05, 0.01}) {
    const auto init = StateField::sample(g, [](double x) { return 0.3 + 0.2 * std::sin(x); },
                                         [](double x) { return 0.2 + 0.1 * std::cos(3 * x); });
    ViscousConfig cfg;
    cfg.eps = eps;
    cfg.base.t_end = 1.0;
    cfg.base.record_steps = true;
    double u0 = 0.0, v0 = 0.0;
    for (int i = 0; i < init.size(); ++i) {
      u0 = std::max(u0, std::abs(init.u[i]));
      v0 = std::max(v0, std::abs(init.v[i]));
    }
    double prev = lp_norm(init, 2.0);
    for (const auto& f : simulate_viscous(init, phi, {0.3, 0.1}, cfg)) {
      for (int i = 0; i < f.size(); ++i) {
        REQUIRE(std::abs(f.u[i]) <= u0 + 1e-8);
        REQUIRE(std::abs(f.v[i]) <= v0 + 1e-8);
      }
      const double n = lp_norm(f, 2.0);
      REQUIRE(n <= prev * (1.0 + 1e-12));
      prev = n;
    }
  }
}

TEST_CASE("l1 distance") {
  const Grid1D g(0.0, 1.0, 10, Boundary::Periodic);
  const auto a = StateField::sample(g, [](double) { return 1.0; }, [](double) { return 0.0; });
  const auto b = StateField::sample(g, [](double) { return 0.0; }, [](double) { return 2.0; });
  CHECK(l1_distance(a, b) == doctest::Approx(3.0));
  CHECK_THROWS_AS(l1_distance(a, StateField(Grid1D(0.0, 1.0, 12, Boundary::Periodic))), Error);
}
