#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kkd/model.hpp"

namespace kkd {

// Radial entropy-entropy flux pair (eta(r), q(r)) for the symmetric system.
//
// The flux is stored as q(r) = B(r) + c * int_0^r g(s) ds. For the power
// family eta = r^m this is q = m r^m phi - m (m - 1) int_0^r s^(m-1) phi;
// for a general eta it is q = eta phi + int_0^r (s eta' - eta) phi'.
// The running integral is cached on a uniform knot grid at construction,
// so pairs are immutable and cheap to evaluate afterwards.
class EntropyPair {
public:
  using Fn = std::function<double(double)>;

  EntropyPair(Fn eta, Fn eta_prime, Fn boundary, Fn integrand, double coeff, double r_max,
              std::optional<double> m, double quadrature_tol);

  double eta(double r) const { return eta_(r); }
  double eta_prime(double r) const { return eta_prime_(r); }
  double q(double r) const;
  // q(rb) - q(ra), integrated directly over [ra, rb].
  double q_increment(double ra, double rb) const;

  std::optional<double> m() const noexcept { return m_; }
  double quadrature_tol() const noexcept { return tol_; }
  double r_max() const noexcept { return r_max_; }

  // Evaluated at a state.
  double eta(const State& s) const { return eta(s.r()); }
  double q(const State& s) const { return q(s.r()); }
  // grad(eta) . (a u, b v) = eta'(r) (a u^2 + b v^2) / r.
  double damping_production(const State& s, const Damping& d) const;

  // Same eta with q multiplied by factor; used as a negative control.
  EntropyPair with_scaled_flux(double factor) const;

private:
  double tail_integral(double r, std::size_t& knot) const;

  Fn eta_, eta_prime_, boundary_, integrand_;
  double coeff_;
  double r_max_;
  std::optional<double> m_;
  double tol_;
  double knot_step_ = 0.0;
  std::vector<double> cumulative_;  // int_0^{k * knot_step} g
};

// eta = r^m, m >= 1.
EntropyPair power_entropy_pair(double m, const PhiModel& phi, double quadrature_tol = 1e-10);

// Builds q from psi' = (r eta' - eta) phi' (radial form of the pairing condition).
// Throws NonLipschitz if r eta'(r) is unbounded as r -> 0.
EntropyPair flux_from_eta(std::function<double(double)> eta,
                          std::function<double(double)> eta_prime, const PhiModel& phi,
                          double quadrature_tol = 1e-10);

struct PairResidualReport {
  double max_residual = 0.0;
  State worst_state{};
  double threshold = 0.0;
  bool pass = false;
  int n_states = 0;
};

// max over states of |grad(eta) A - grad(q)|, gradients by fourth-order
// central differences in (u, v). Passes iff max residual <= 10 * quadrature_tol.
PairResidualReport verify_pair(const EntropyPair& pair, const PhiModel& phi,
                               std::span<const State> states);

struct FluxBoundReport {
  double max_ratio = 0.0;  // max |q(r)| / (2 m M r^m)
  double at_r = 0.0;
  bool pass = false;
};

// Samples |q(r)| <= 2 m M r^m on (0, r_working].
FluxBoundReport flux_bound(const EntropyPair& pair, double M, double r_working,
                           int n_samples = 2000);


}  // namespace kkd
