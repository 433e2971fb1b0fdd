#pragma once

#include <functional>
#include <vector>

#include "kkd/field.hpp"
#include "kkd/model.hpp"

namespace kkd {

enum class Scheme { LaxFriedrichs, Rusanov };
enum class Splitting { Lie, Strang };

struct SolverConfig {
  Scheme scheme = Scheme::Rusanov;
  double cfl = 0.45;
  Splitting splitting = Splitting::Strang;
  double t_end = 1.0;
  std::vector<double> output_times;  // snapshots; t = 0 records the initial field
  bool record_steps = false;         // also keep the initial field and every step

  void validate() const;
};

// max over cells of max(|lambda1|, |lambda2|), floored at 1e-14.
double max_wavespeed(const StateField& f, const PhiModel& phi);

// Conservative first-order update of u_t + F(u)_x = 0 over dt.
StateField hyperbolic_substep(const StateField& f, const PhiModel& phi, double dt,
                              Scheme scheme = Scheme::Rusanov);

// Exact solution of u' = -a u, v' = -b v over dt.
StateField damping_substep(const StateField& f, const Damping& d, double dt);

// Operator-split integration to cfg.t_end; returns the snapshots at
// cfg.output_times (plus every step when cfg.record_steps).
Trajectory simulate(const StateField& init, const PhiModel& phi, const Damping& d,
                    const SolverConfig& cfg);

// Unnormalized bump exp(-1 / (1 - x^2)) on |x| < 1, zero elsewhere.
double bump(double x);
// d/dx of bump.
double bump_derivative(double x);

struct MollifiedField {
  StateField field;
  bool under_resolved = false;  // eps < dx: kernel collapses to a single cell
};

// Discrete convolution of the sampled data with j_eps(x) = j(x / eps) / eps,
// normalized to unit discrete mass.
MollifiedField mollify_initial_data(const std::function<double(double)>& u0,
                                    const std::function<double(double)>& v0, double eps,
                                    const Grid1D& grid);

namespace detail {

// Flux update plus eps * (second difference) / dx^2. eps = 0 is the
// hyperbolic update.
StateField flux_update(const StateField& f, const PhiModel& phi, double dt, Scheme scheme,
                       double eps);

struct StepLimits {
  double cfl;
  double eps = 0.0;
  double diffusion_number = 0.5;
};

Trajectory integrate(const StateField& init, const PhiModel& phi, const Damping& d,
                     const SolverConfig& cfg, const StepLimits& limits);

}  // namespace detail

}  // namespace kkd
