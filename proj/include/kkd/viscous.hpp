#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kkd/solver.hpp"

namespace kkd {

// Parabolic regularization u_t + F(u)_x + (a u, b v) = eps u_xx.
struct ViscousConfig {
  SolverConfig base;
  double eps = 0.0;
  double diffusion_number = 0.4;  // eps dt / dx^2 bound

  void validate() const;
};

// One split step: half damping, explicit flux + three-point diffusion, half damping.
StateField viscous_step(const StateField& f, const PhiModel& phi, const Damping& d,
                        const ViscousConfig& cfg, double dt);

// dt = min(cfl dx / max|lambda|, diffusion_number dx^2 / eps) each step.
Trajectory simulate_viscous(const StateField& init, const PhiModel& phi, const Damping& d,
                            const ViscousConfig& cfg);

// sum_i (|du_i| + |dv_i|) dx over matching grids.
double l1_distance(const StateField& a, const StateField& b);

struct SweepRow {
  double eps;
  double distance;
};

// For each eps (strictly decreasing, >= 0) runs the viscous solver to
// base.t_end on init's grid and measures the L1 distance at t_end to
// `reference`, or to the hyperbolic solution when no reference is given.
std::vector<SweepRow> vanishing_viscosity_sweep(const StateField& init, const PhiModel& phi,
                                                const Damping& d, const SolverConfig& base,
                                                std::span<const double> eps_list,
                                                double diffusion_number = 0.4,
                                                const std::optional<StateField>& reference = {});

}  // namespace kkd
