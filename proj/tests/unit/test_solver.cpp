#include <doctest.h>

#include <cmath>
#include <numeric>

#include "kkd/error.hpp"
#include "kkd/solver.hpp"
#include "support.hpp"

using namespace kkd;
using kkd::testing::kTwoPi;

namespace {

double sum(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

StateField smooth_field(int n, double phase = 0.0) {
  const Grid1D g(0.0, kTwoPi, n, Boundary::Periodic);
  return StateField::sample(
      g, [=](double x) { return 0.3 + 0.1 * std::sin(x + phase); },
      [=](double x) { return 0.2 + 0.05 * std::cos(2 * x); });
}

double l1_vs(const StateField& f, double (*exact)(double)) {
  double e = 0.0;
  for (int i = 0; i < f.size(); ++i) e += std::abs(f.u[i] - exact(f.grid.center(i)));
  return e * f.grid.dx();
}

}  // namespace

TEST_CASE("grid basics") {
  const Grid1D g(0.0, 1.0, 10, Boundary::Outflow);
  CHECK(g.dx() == doctest::Approx(0.1));
  CHECK(g.center(0) == doctest::Approx(0.05));
  CHECK(g.centers().size() == 10);
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 4, Boundary::Periodic), Error);
  CHECK_THROWS_AS(Grid1D(1.0, 0.0, 16, Boundary::Periodic), Error);
}

TEST_CASE("max wavespeed examples") {
  const Grid1D g(0.0, 1.0, 8, Boundary::Periodic);
  const auto f = StateField::sample(g, [](double) { return 3.0; }, [](double) { return 4.0; });
  CHECK(max_wavespeed(f, PhiModel::power(1.0)) == doctest::Approx(10.0));
  CHECK(max_wavespeed(StateField(g), PhiModel::power(1.0)) == 1e-14);
  CHECK(max_wavespeed(f, PhiModel::constant(2.5)) == 2.5);
  CHECK_THROWS_AS(max_wavespeed(f, PhiModel::power(1.0, 2.0)), Error);
}

TEST_CASE("damping substep examples") {
  const Grid1D g(0.0, 1.0, 8, Boundary::Periodic);
  auto f = StateField::sample(g, [](double) { return 4.0; }, [](double) { return 1.0; });
  CHECK(damping_substep(f, {1.0, 0.0}, std::log(2.0)).u[0] == doctest::Approx(2.0));
  const auto same = damping_substep(f, {0.0, 0.0}, 3.0);
  CHECK(same.u == f.u);
  CHECK(same.v == f.v);
  f = StateField::sample(g, [](double) { return 1.0; }, [](double) { return 1.0; });
  const auto out = damping_substep(f, {1.0, 0.5}, 2.0);
  CHECK(out.u[3] == doctest::Approx(std::exp(-2.0)));
  CHECK(out.v[3] == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(damping_substep(f, {1.0, 0.5}, -1.0), Error);
}

TEST_CASE("hyperbolic substep basics") {
  const auto phi = PhiModel::power(1.0);
  const Grid1D g(0.0, kTwoPi, 64, Boundary::Periodic);
  const StateField zero(g);
  const auto z = hyperbolic_substep(zero, phi, 0.01);
  for (int i = 0; i < z.size(); ++i) CHECK(z.u[i] == 0.0);

  // u = v stays u = v
  const auto sym = StateField::sample(g, [](double x) { return 0.5 + 0.2 * std::sin(x); },
                                      [](double x) { return 0.5 + 0.2 * std::sin(x); });
  auto s = sym;
  for (int k = 0; k < 50; ++k) s = hyperbolic_substep(s, phi, 0.4 * g.dx() / max_wavespeed(s, phi));
  for (int i = 0; i < s.size(); ++i) CHECK(s.u[i] == s.v[i]);

  try {
    hyperbolic_substep(sym, phi, 10.0 * g.dx());
    FAIL("expected CFLViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CFLViolation);
  }
}

TEST_CASE("conservation without damping") {
  for (Scheme scheme : {Scheme::Rusanov, Scheme::LaxFriedrichs}) {
    const auto phi = PhiModel::shifted(0.5, 2.0);
    auto f = smooth_field(200);
    const double u0 = sum(f.u), v0 = sum(f.v);
    for (int k = 0; k < 100; ++k) f = hyperbolic_substep(f, phi, 0.4 * f.grid.dx() / max_wavespeed(f, phi), scheme);
    CHECK(std::abs(sum(f.u) - u0) * f.grid.dx() <= 1e-12);
    CHECK(std::abs(sum(f.v) - v0) * f.grid.dx() <= 1e-12);
  }
}

TEST_CASE("damped mass identity per step") {
  const auto phi = PhiModel::power(1.0);
  const Damping d{0.6, 0.2};
  SolverConfig cfg;
  cfg.t_end = 0.5;
  cfg.record_steps = true;
  const auto init = smooth_field(256);
  const auto traj = simulate(init, phi, d, cfg);
  StateField prev = init;
  for (const auto& f : traj) {
    const double dt = f.t - prev.t;
    CHECK(std::abs(sum(f.u) - std::exp(-d.a * dt) * sum(prev.u)) * f.grid.dx() <= 1e-12);
    CHECK(std::abs(sum(f.v) - std::exp(-d.b * dt) * sum(prev.v)) * f.grid.dx() <= 1e-12);
    prev = f;
  }
}

TEST_CASE("output times are hit exactly and t=0 records the initial data") {
  SolverConfig cfg;
  cfg.t_end = 1.0;
  cfg.output_times = {0.0, 0.3, 1.0 / 3.0, 1.0};
  const auto init = smooth_field(64);
  const auto traj = simulate(init, PhiModel::power(1.0), {0.1, 0.1}, cfg);
  REQUIRE(traj.size() == 4);
  CHECK(traj[0].t == 0.0);
  CHECK(traj[0].u == init.u);
  CHECK(traj[1].t == 0.3);
  CHECK(traj[2].t == 1.0 / 3.0);
  CHECK(traj[3].t == 1.0);
  cfg.output_times = {};
  CHECK(simulate(init, PhiModel::power(1.0), {0.1, 0.1}, cfg).size() == 1);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.cfl = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.cfl = 0.5;
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.t_end = 1.0;
  cfg.output_times = {2.0};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.output_times = {};
  CHECK_THROWS_AS(simulate(smooth_field(16), PhiModel::power(1.0), {-1.0, 0.0}, cfg), Error);
}

TEST_CASE("zero initial data stays zero") {
  SolverConfig cfg;
  cfg.output_times = {0.5, 1.0};
  const Grid1D g(0.0, 1.0, 32, Boundary::Outflow);
  for (const auto& f : simulate(StateField(g), PhiModel::power(1.0), {0.2, 0.1}, cfg)) {
    for (int i = 0; i < f.size(); ++i) {
      CHECK(f.u[i] == 0.0);
      CHECK(f.v[i] == 0.0);
    }
  }
}

double scalar_exact(double x) { return std::sin(x - 2.0) * std::exp(-1.0); }

TEST_CASE("constant-phi channel converges at first order to the transport oracle") {
  for (Scheme scheme : {Scheme::Rusanov, Scheme::LaxFriedrichs}) {
    std::vector<double> errs;
    for (int n : {128, 256, 512}) {
      const Grid1D g(0.0, kTwoPi, n, Boundary::Periodic);
      const auto init = StateField::sample(g, [](double x) { return std::sin(x); }, [](double) { return 0.0; });
      SolverConfig cfg;
      cfg.t_end = 2.0;
      cfg.scheme = scheme;
      errs.push_back(l1_vs(simulate(init, PhiModel::constant(1.0), {0.5, 0.5}, cfg).back(), scalar_exact));
    }
    CHECK(errs[0] / errs[1] == doctest::Approx(2.0).epsilon(0.2));
    CHECK(errs[1] / errs[2] == doctest::Approx(2.0).epsilon(0.2));
  }
}

TEST_CASE("Lie and Strang both converge") {
  for (Splitting split : {Splitting::Lie, Splitting::Strang}) {
    const Grid1D g(0.0, kTwoPi, 512, Boundary::Periodic);
    const auto init = StateField::sample(g, [](double x) { return std::sin(x); }, [](double) { return 0.0; });
    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.splitting = split;
    CHECK(l1_vs(simulate(init, PhiModel::constant(1.0), {0.5, 0.5}, cfg).back(), scalar_exact) < 2e-2);
  }
}

TEST_CASE("property: L-infinity bound") {
  const auto phi = PhiModel::power(1.0);
  SolverConfig cfg;
  cfg.t_end = 3.0;
  cfg.record_steps = true;
  for (int seed = 0; seed < 4; ++seed) {
    const auto init = smooth_field(128, 0.7 * seed);
    double u0 = 0.0, v0 = 0.0;
    for (int i = 0; i < init.size(); ++i) {
      u0 = std::max(u0, std::abs(init.u[i]));
      v0 = std::max(v0, std::abs(init.v[i]));
    }
    double pu = u0, pv = v0;
    for (const auto& f : simulate(init, phi, {0.4, 0.1}, cfg)) {
      double mu = 0.0, mv = 0.0;
      for (int i = 0; i < f.size(); ++i) {
        mu = std::max(mu, std::abs(f.u[i]));
        mv = std::max(mv, std::abs(f.v[i]));
      }
      REQUIRE(mu <= pu * (1.0 + 1e-14));
      REQUIRE(mv <= pv * (1.0 + 1e-14));
      pu = mu;
      pv = mv;
    }
  }
}

TEST_CASE("property: swapping channels and rates swaps the outputs") {
  const auto phi = PhiModel::shifted(0.5, 1.0);
  const auto init = smooth_field(128);
  StateField swapped = init;
  std::swap(swapped.u, swapped.v);
  SolverConfig cfg;
  cfg.t_end = 1.5;
  const auto a = simulate(init, phi, {0.5, 0.1}, cfg).back();
  const auto b = simulate(swapped, phi, {0.1, 0.5}, cfg).back();
  CHECK(a.u == b.v);
  CHECK(a.v == b.u);
}

TEST_CASE("outflow boundary keeps constant states") {
  const Grid1D g(-1.0, 1.0, 64, Boundary::Outflow);
  const auto init = StateField::sample(g, [](double) { return 0.3; }, [](double) { return 0.4; });
  SolverConfig cfg;
  cfg.t_end = 1.0;
  const auto f = simulate(init, PhiModel::power(1.0), {0.0, 0.0}, cfg).back();
  for (int i = 0; i < f.size(); ++i) {
    CHECK(f.u[i] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(f.v[i] == doctest::Approx(0.4).epsilon(1e-14));
  }
}

TEST_CASE("mollifier") {
  const Grid1D g(0.0, 1.0, 200, Boundary::Periodic);
  const auto c = mollify_initial_data([](double) { return 2.0; }, [](double) { return -1.0; }, 0.05, g);
  for (int i = 0; i < 200; ++i) {
    CHECK(c.field.u[i] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.field.v[i] == doctest::Approx(-1.0).epsilon(1e-14));
  }
  CHECK_FALSE(c.under_resolved);

  // step data: mass preserved, monotone on the rising edge
  auto step = [](double x) { return x > 0.25 && x < 0.75 ? 1.0 : 0.0; };
  const auto raw = StateField::sample(g, step, step);
  const auto m = mollify_initial_data(step, step, 8 * g.dx(), g);
  CHECK(std::abs(sum(m.field.u) - sum(raw.u)) * g.dx() <= 1e-12);
  for (int i = 1; i < 100; ++i) CHECK(m.field.u[i] >= m.field.u[i - 1] - 1e-15);

  // eps -> 0: pointwise sampling within O(eps) for Lipschitz data
  auto lip = [](double x) { return std::abs(x - 0.5); };
  const auto fine = mollify_initial_data(lip, lip, 0.01, g);
  for (int i = 0; i < 200; ++i) CHECK(std::abs(fine.field.u[i] - lip(g.center(i))) <= 0.01);

  CHECK(mollify_initial_data(lip, lip, 0.1 * g.dx(), g).under_resolved);
  CHECK_THROWS_AS(mollify_initial_data(lip, lip, 0.0, g), Error);
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(0.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(bump_derivative(0.5) == doctest::Approx((bump(0.5 + 1e-6) - bump(0.5 - 1e-6)) / 2e-6).epsilon(1e-6));
}
