#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kkd/entropy.hpp"
#include "kkd/field.hpp"
#include "kkd/model.hpp"

namespace kkd {

// k(x) = exp(-h(x - center)) with h(y) = sqrt(1 + y^2): |h'| <= 1, |h''| <= 1,
// h(y) ~ |y| for large |y|, hence |k'| <= k.
struct WeightFunction {
  double center = 0.0;

  double h(double x) const;
  double h_prime(double x) const;
  double h_second(double x) const;
  double k(double x) const;
  double k_prime(double x) const;
};

// (sum_i r_i^p k(x_i) dx)^(1/p); p = +inf gives max r.
double lp_norm(const StateField& f, double p, const std::optional<WeightFunction>& w = {});

// u0(x - a t) exp(-b t), the damped linear transport solution.
double exact_scalar_solution(const std::function<double(double)>& u0, double a, double b,
                             double x, double t);

struct CharacteristicsOptions {
  // Interval of feet scanned for crossings; defaults to the root bracket.
  std::optional<std::pair<double, double>> scan;
  int n_scan = 2048;
  int n_scan_times = 8;
  double quadrature_tol = 1e-13;
};

// Equal damping reduces the system to r_t + (r phi(r))_x + a r = 0. The
// characteristic from foot xi carries r0(xi) e^{-a s} at speed
// lambda2 = phi + r phi'. Throws ShockFormed when feet cross before t.
double radial_characteristics_oracle(const std::function<double(double)>& r0,
                                     const PhiModel& phi, double a, double x, double t,
                                     const CharacteristicsOptions& opts = {});

// Same, for many points sharing one crossing scan.
std::vector<double> radial_characteristics_profile(const std::function<double(double)>& r0,
                                                   const PhiModel& phi, double a,
                                                   std::span<const double> xs, double t,
                                                   const CharacteristicsOptions& opts = {});

struct DecayOptions {
  double p = 2.0;
  std::optional<WeightFunction> weight;
  double fit_start_fraction = 0.1;  // fit window [fraction * T, T]
  double t_burn = 0.0;
  double tolerance = 5e-2;          // pointwise bound slack
};

struct DecayReport {
  double p = 2.0;
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<double> bound;  // (1 + tol) norms(0) exp(-theorem_rate (t - t0))
  double fitted_rate = 0.0;
  double K_est = 0.0;
  double theorem_rate = 0.0;
  std::string rate_basis;
  double nominal_rate = 0.0;  // sup phi, the rate the weighted chain asserts
  double rate_lo = 0.0;
  double rate_hi = 0.0;
  bool bound_ok = false;
  bool rate_ok = false;
  bool pass = false;
};

// Least-squares fit of log ||r(t)||_p and comparison with the Gronwall rate.
DecayReport decay_harness(const Trajectory& traj, const PhiModel& phi, const Damping& d,
                          const DecayOptions& opts = {});

// Slope and intercept of the least-squares line through (x, y).
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

// theta(x, t) = j((x - x0) / wx) j((t - t0) / wt).
struct TestFunction {
  double x0, t0, wx, wt;

  double value(double x, double t) const;
  double dx(double x, double t) const;
  double dt(double x, double t) const;
};

struct EntropyResidualReport {
  std::vector<double> residuals;  // R(theta), one per test function
  double max_residual = 0.0;
  double tol_scheme = 0.0;  // C (dx + dt)
  double dx = 0.0;
  double dt = 0.0;          // largest snapshot spacing
  bool pass = false;
};

// R(theta) = -int int [eta theta_t + q theta_x - grad(eta).(a u, b v) theta] dx dt
// with eta, q and the damping term interpolated linearly between snapshots
// (cell midpoints in x, 3-point Gauss in t). An entropy solution has
// R <= 0; the report passes when every R <= tol_constant * (dx + dt).
EntropyResidualReport entropy_residual(const Trajectory& traj, const EntropyPair& pair,
                                       const Damping& d, std::span<const TestFunction> tests,
                                       double tol_constant = 0.0);

struct RiemannInvariantReport {
  std::vector<double> times;
  std::vector<double> sup_abs_z;
  std::vector<double> predicted_sup_abs_z;  // exp(-(a - b) t) sup|Z(., 0)|
  std::vector<double> sup_w;
  double max_z_deviation = 0.0;  // relative
  double max_w_excess = 0.0;     // relative growth of sup W over sup W(0)
  double fitted_z_rate = 0.0;
  bool pass = false;
};

RiemannInvariantReport riemann_invariant_diagnostics(const Trajectory& traj, const PhiModel& phi,
                                                     const Damping& d, double tolerance = 5e-2);

// Per snapshot interval: (d/dt int r^2) + 2 int (a u^2 + b v^2), by differences.
std::vector<double> energy_balance(const Trajectory& traj, const Damping& d);

struct WeightedChainReport {
  // max over steps of  d/dt int eta k  -  (int q k' - int P k), P = grad(eta).(a u, b v)
  double max_balance_excess = 0.0;
  // max over steps of  d/dt int eta k  -  m (2 M - min(a, b)) int eta k
  double max_gronwall_excess = 0.0;
  double M = 0.0;
};

WeightedChainReport weighted_entropy_chain(const Trajectory& traj, const EntropyPair& pair,
                                           const PhiModel& phi, const Damping& d,
                                           const WeightFunction& w);

}  // namespace kkd
