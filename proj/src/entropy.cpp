#include "kkd/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kkd/error.hpp"
#include "kkd/quadrature.hpp"

namespace kkd {

namespace {

constexpr int kKnots = 256;

}  // namespace

EntropyPair::EntropyPair(Fn eta, Fn eta_prime, Fn boundary, Fn integrand, double coeff,
                         double r_max, std::optional<double> m, double quadrature_tol)
    : eta_(std::move(eta)),
      eta_prime_(std::move(eta_prime)),
      boundary_(std::move(boundary)),
      integrand_(std::move(integrand)),
      coeff_(coeff),
      r_max_(r_max),
      m_(m),
      tol_(quadrature_tol) {
  if (!(quadrature_tol > 0.0)) {
    throw Error(ErrorKind::ConfigError, "entropy pair: quadrature tolerance must be positive");
  }
  knot_step_ = r_max_ / kKnots;
  cumulative_.assign(kKnots + 1, 0.0);
  if (coeff_ == 0.0) return;
  const double panel_tol = 0.5 * tol_ / std::abs(coeff_) / kKnots;
  for (int k = 0; k < kKnots; ++k) {
    const double lo = k * knot_step_;
    const double hi = k + 1 == kKnots ? r_max_ : (k + 1) * knot_step_;
    cumulative_[k + 1] = cumulative_[k] + integrate(integrand_, lo, hi, panel_tol).value;
  }
}

double EntropyPair::tail_integral(double r, std::size_t& knot) const {
  knot = std::min<std::size_t>(static_cast<std::size_t>(r / knot_step_), kKnots);
  const double lo = knot * knot_step_;
  if (r <= lo) return 0.0;
  return integrate(integrand_, lo, r, 0.5 * tol_ / std::abs(coeff_)).value;
}

double EntropyPair::q(double r) const {
  if (!(r >= 0.0) || r > r_max_ * (1.0 + 1e-12)) {
    throw Error(ErrorKind::OutOfRange, "entropy flux: r = " + std::to_string(r) + " out of range");
  }
  if (r == 0.0) return 0.0;
  const double b = boundary_(r);
  if (coeff_ == 0.0) return b;
  std::size_t knot = 0;
  const double tail = tail_integral(r, knot);
  return b + coeff_ * (cumulative_[knot] + tail);
}

double EntropyPair::q_increment(double ra, double rb) const {
  const double db = (rb == 0.0 ? 0.0 : boundary_(rb)) - (ra == 0.0 ? 0.0 : boundary_(ra));
  if (coeff_ == 0.0) return db;
  return db + coeff_ * integrate(integrand_, ra, rb, tol_ / std::abs(coeff_)).value;
}

double EntropyPair::damping_production(const State& s, const Damping& d) const {
  const double r = s.r();
  if (r == 0.0) return 0.0;
  return eta_prime(r) * (d.a * s.u * s.u + d.b * s.v * s.v) / r;
}

EntropyPair EntropyPair::with_scaled_flux(double factor) const {
  EntropyPair copy = *this;
  const Fn base = boundary_;
  copy.boundary_ = [base, factor](double r) { return factor * base(r); };
  copy.coeff_ = coeff_ * factor;
  return copy;
}

EntropyPair power_entropy_pair(double m, const PhiModel& phi, double quadrature_tol) {
  if (!(m >= 1.0)) {
    throw Error(ErrorKind::ConfigError,
                "power entropy: exponent m must be >= 1 for a convex, Lipschitz eta");
  }
  auto eta = [m](double r) { return std::pow(r, m); };
  auto eta_prime = [m](double r) { return m * std::pow(r, m - 1.0); };
  auto boundary = [m, phi](double r) { return m * std::pow(r, m) * phi.value(r); };
  auto integrand = [m, phi](double s) { return std::pow(s, m - 1.0) * phi.value(s); };
  return {eta, eta_prime, boundary, integrand, -m * (m - 1.0), phi.r_max(), m, quadrature_tol};
}

EntropyPair flux_from_eta(std::function<double(double)> eta,
                          std::function<double(double)> eta_prime, const PhiModel& phi,
                          double quadrature_tol) {
  const double r_max = phi.r_max();
  const double ref = std::abs(r_max * 1e-2 * eta_prime(r_max * 1e-2));
  for (int k = 2; k <= 12; ++k) {
    const double r = r_max * std::pow(10.0, -k);
    const double g = std::abs(r * eta_prime(r));
    if (!std::isfinite(g) || g > 1e6 * (1.0 + ref)) {
      throw Error(ErrorKind::NonLipschitz, "entropy: r eta'(r) unbounded as r -> 0");
    }
  }
  auto boundary = [eta, phi](double r) { return eta(r) * phi.value(r); };
  auto integrand = [eta, eta_prime, phi](double s) {
    return (s * eta_prime(s) - eta(s)) * phi.d1(s);
  };
  return {std::move(eta), std::move(eta_prime), boundary, integrand, 1.0, r_max,
          std::nullopt, quadrature_tol};
}

PairResidualReport verify_pair(const EntropyPair& pair, const PhiModel& phi,
                               std::span<const State> states) {
  PairResidualReport rep;
  rep.threshold = 10.0 * pair.quadrature_tol();
  rep.n_states = static_cast<int>(states.size());
  constexpr std::array<double, 4> offsets = {-2.0, -1.0, 1.0, 2.0};
  constexpr std::array<double, 4> weights = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
  for (const State& s : states) {
    const double r0 = s.r();
    const double h = 1e-3 * r0;
    const Mat2 A = jacobian(s, phi);
    Vec2 grad_eta{0.0, 0.0}, grad_q{0.0, 0.0};
    for (int dir = 0; dir < 2; ++dir) {
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        State p = s;
        (dir == 0 ? p.u : p.v) += offsets[k] * h;
        const double rp = p.r();
        grad_eta[dir] += weights[k] * (pair.eta(rp) - pair.eta(r0)) / h;
        grad_q[dir] += weights[k] * pair.q_increment(r0, rp) / h;
      }
    }
    const double res0 = grad_eta[0] * A[0][0] + grad_eta[1] * A[1][0] - grad_q[0];
    const double res1 = grad_eta[0] * A[0][1] + grad_eta[1] * A[1][1] - grad_q[1];
    const double res = std::hypot(res0, res1);
    if (res > rep.max_residual || std::isnan(res)) {
      rep.max_residual = res;
      rep.worst_state = s;
    }
  }
  rep.pass = rep.max_residual <= rep.threshold;
  return rep;
}

FluxBoundReport flux_bound(const EntropyPair& pair, double M, double r_working, int n_samples) {
  if (!pair.m()) throw Error(ErrorKind::ConfigError, "flux bound needs a power-family pair");
  if (!(M > 0.0)) throw Error(ErrorKind::ConfigError, "flux bound needs M = sup phi > 0");
  const double m = *pair.m();
  FluxBoundReport rep;
  auto probe = [&](double r) {
    const double ratio = std::abs(pair.q(r)) / (2.0 * m * M * std::pow(r, m));
    if (ratio > rep.max_ratio || std::isnan(ratio)) {
      rep.max_ratio = ratio;
      rep.at_r = r;
    }
  };
  for (int i = 1; i <= n_samples; ++i) probe(r_working * static_cast<double>(i) / n_samples);
  for (int k = 1; k <= 8; ++k) probe(r_working * std::pow(10.0, -k - 1.0 * std::log10(n_samples)));
  rep.pass = rep.max_ratio <= 1.0 + 1e-12;
  return rep;
}

}  // namespace kkd
