#include <doctest.h>

#include <cmath>

#include "kkd/entropy.hpp"
#include "kkd/error.hpp"
#include "support.hpp"

using namespace kkd;
using kkd::testing::random_states;

namespace {

std::vector<PhiModel> families() {
  return {PhiModel::power(1.0, 10.0), PhiModel::power(2.0, 10.0), PhiModel::power(0.5, 10.0),
          PhiModel::shifted(1.0, 1.0, 10.0)};
}

}  // namespace

TEST_CASE("power pair closed forms") {
  const auto p = power_entropy_pair(2.0, PhiModel::power(1.0, 10.0));
  CHECK(p.q(1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(p.q(1.0) - 4.0 / 3.0) <= 1e-10);
  CHECK(p.q(0.0) == 0.0);
  CHECK(p.eta(2.0) == doctest::Approx(4.0));
  CHECK(p.eta_prime(2.0) == doctest::Approx(4.0));
  REQUIRE(p.m().has_value());
  CHECK(*p.m() == 2.0);

  // m = 1: q = r phi(r)
  const auto phi = PhiModel::shifted(1.0, 2.0, 10.0);
  const auto one = power_entropy_pair(1.0, phi);
  for (double r : {0.1, 0.7, 3.0}) CHECK(one.q(r) == doctest::Approx(r * phi.value(r)).epsilon(1e-12));

  // m = 2, phi = 1: q = 2 r^2 - r^2 = r^2
  const auto c = power_entropy_pair(2.0, PhiModel::constant(1.0, 10.0));
  CHECK(std::abs(c.q(1.0) - 1.0) <= 1e-10);
  CHECK(std::abs(c.q(3.0) - 9.0) <= 1e-9);

  // m = 1.5, phi = r: q = 1.5 r^2.5 - 0.75 * r^2.5 / 2.5
  const auto h = power_entropy_pair(1.5, PhiModel::power(1.0, 10.0));
  for (double r : {0.2, 1.0, 4.0}) {
    const double expect = 1.5 * std::pow(r, 2.5) - 0.75 * std::pow(r, 2.5) / 2.5;
    CHECK(std::abs(h.q(r) - expect) <= 1e-10 * (1.0 + expect));
  }
}

TEST_CASE("power pair errors") {
  CHECK_THROWS_AS(power_entropy_pair(0.5, PhiModel::power(1.0)), Error);
  const auto p = power_entropy_pair(2.0, PhiModel::power(1.0, 2.0));
  CHECK_THROWS_AS(p.q(3.0), Error);
}

TEST_CASE("flux_from_eta examples") {
  const auto phi = PhiModel::shifted(1.0, 1.0, 10.0);
  const auto lin = flux_from_eta([](double r) { return r; }, [](double) { return 1.0; }, phi);
  for (double r : {0.3, 2.0}) CHECK(lin.q(r) == doctest::Approx(r * phi.value(r)).epsilon(1e-12));

  const auto cube = flux_from_eta([](double r) { return r * r * r; }, [](double r) { return 3 * r * r; }, phi);
  for (double r : {0.5, 1.0, 2.5}) {
    const double expect = std::pow(r, 4) / 2.0 + r * r * r * (1.0 + r);
    CHECK(std::abs(cube.q(r) - expect) <= 1e-9 * (1.0 + expect));
  }

  try {
    flux_from_eta([](double r) { return std::log(r); }, [](double r) { return 1.0 / (r * r); }, phi);
    FAIL("expected NonLipschitz");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonLipschitz);
  }
}

TEST_CASE("property: the two constructions agree") {
  for (const auto& phi : families()) {
    for (double m : {1.0, 1.5, 2.0}) {
      const auto a = power_entropy_pair(m, phi);
      const auto b = flux_from_eta([m](double r) { return std::pow(r, m); },
                                   [m](double r) { return m * std::pow(r, m - 1.0); }, phi);
      for (int k = 0; k <= 50; ++k) {
        const double r = 3.0 * k / 50;
        REQUIRE(std::abs(a.q(r) - b.q(r)) <= 2.0 * a.quadrature_tol() * (1.0 + std::abs(a.q(r))));
      }
    }
  }
}

TEST_CASE("property: pairing residual on random states") {
  const auto states = random_states(21, 100, 0.05, 2.0, true);
  for (const auto& phi : families()) {
    for (double m : {1.0, 1.5, 2.0}) {
      const auto rep = verify_pair(power_entropy_pair(m, phi), phi, states);
      CHECK(rep.max_residual <= 1e-6);
      CHECK(rep.n_states == 100);
    }
  }
}

TEST_CASE("verify_pair catches a corrupted flux") {
  const auto phi = PhiModel::power(1.0, 10.0);
  const auto states = random_states(22, 100, 0.1, 2.0);
  const auto good = power_entropy_pair(2.0, phi);
  CHECK(verify_pair(good, phi, states).pass);
  const auto bad = good.with_scaled_flux(1.01);
  const auto rep = verify_pair(bad, phi, states);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_residual > 1e-4);

  // eta = r is an exact pair; residual at round-off
  const auto lin = flux_from_eta([](double r) { return r; }, [](double) { return 1.0; }, phi);
  CHECK(verify_pair(lin, phi, states).max_residual <= 1e-8);
}

TEST_CASE("flux bound examples") {
  const auto p = power_entropy_pair(2.0, PhiModel::power(1.0, 10.0));
  const auto rep = flux_bound(p, 1.0, 1.0);
  CHECK(rep.pass);
  CHECK(rep.max_ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  const auto one = flux_bound(power_entropy_pair(1.0, PhiModel::shifted(1.0, 1.0, 10.0)), 2.0, 1.0);
  CHECK(one.max_ratio <= 0.5 + 1e-12);
  const auto c = flux_bound(power_entropy_pair(2.0, PhiModel::constant(1.0, 10.0)), 1.0, 1.0);
  CHECK(c.max_ratio == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("property: flux bound for m in [1, 2]") {
  for (const auto& phi : families()) {
    const double M = sup_phi(phi, 1.0);
    for (double m = 1.0; m <= 2.0 + 1e-12; m += 0.25) {
      REQUIRE(flux_bound(power_entropy_pair(m, phi), M, 1.0, 500).pass);
    }
  }
}

TEST_CASE("damping production") {
  const auto p = power_entropy_pair(2.0, PhiModel::power(1.0, 10.0));
  // grad(r^2) . (a u, b v) = 2 (a u^2 + b v^2)
  CHECK(p.damping_production({3.0, 4.0}, {0.6, 0.2}) == doctest::Approx(2 * (0.6 * 9 + 0.2 * 16)));
  CHECK(p.damping_production({0.0, 0.0}, {0.6, 0.2}) == 0.0);
}
