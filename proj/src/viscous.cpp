#include "kkd/viscous.hpp"

#include <cmath>

#include "kkd/error.hpp"

namespace kkd {

void ViscousConfig::validate() const {
  base.validate();
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorKind::ValidationError, "viscosity eps must be nonnegative");
  }
  if (!(diffusion_number > 0.0 && diffusion_number <= 0.5)) {
    throw Error(ErrorKind::ValidationError, "diffusion number must lie in (0, 0.5]");
  }
}

StateField viscous_step(const StateField& f, const PhiModel& phi, const Damping& d,
                        const ViscousConfig& cfg, double dt) {
  cfg.validate();
  const double dx = f.grid.dx();
  if (cfg.eps > 0.0 && cfg.eps * dt / (dx * dx) > cfg.diffusion_number * (1.0 + 1e-12)) {
    throw Error(ErrorKind::StabilityViolation, "eps dt / dx^2 exceeds the diffusion number");
  }
  const bool strang = cfg.base.splitting == Splitting::Strang;
  StateField s = damping_substep(f, d, strang ? 0.5 * dt : dt);
  s = detail::flux_update(s, phi, dt, cfg.base.scheme, cfg.eps);
  if (strang) s = damping_substep(s, d, 0.5 * dt);
  s.t = f.t + dt;
  return s;
}

Trajectory simulate_viscous(const StateField& init, const PhiModel& phi, const Damping& d,
                            const ViscousConfig& cfg) {
  cfg.validate();
  return detail::integrate(init, phi, d, cfg.base,
                           {cfg.base.cfl, cfg.eps, cfg.diffusion_number});
}

double l1_distance(const StateField& a, const StateField& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ConfigError, "l1_distance: grid mismatch");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::abs(a.u[i] - b.u[i]) + std::abs(a.v[i] - b.v[i]);
  return s * a.grid.dx();
}

std::vector<SweepRow> vanishing_viscosity_sweep(const StateField& init, const PhiModel& phi,
                                                const Damping& d, const SolverConfig& base,
                                                std::span<const double> eps_list,
                                                double diffusion_number,
                                                const std::optional<StateField>& reference) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] >= 0.0) || (i > 0 && !(eps_list[i] < eps_list[i - 1]))) {
      throw Error(ErrorKind::ConfigError, "eps list must be nonnegative and strictly decreasing");
    }
  }
  SolverConfig cfg = base;
  cfg.output_times = {base.t_end};
  cfg.record_steps = false;
  const StateField ref = reference ? *reference : simulate(init, phi, d, cfg).back();

  std::vector<SweepRow> rows;
  rows.reserve(eps_list.size());
  for (double eps : eps_list) {
    const ViscousConfig vcfg{cfg, eps, diffusion_number};
    const StateField end = simulate_viscous(init, phi, d, vcfg).back();
    rows.push_back({eps, l1_distance(end, ref)});
  }
  return rows;
}

}  // namespace kkd
