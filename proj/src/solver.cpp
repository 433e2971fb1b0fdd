#include "kkd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kkd/error.hpp"

namespace kkd {

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorKind::ValidationError, "solver.cfl must lie in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::ValidationError, "solver.t_end must be positive");
  }
  for (double t : output_times) {
    if (!(t >= 0.0) || t > t_end * (1.0 + 1e-12)) {
      throw Error(ErrorKind::ValidationError, "solver.output_times must lie in [0, t_end]");
    }
  }
}

double max_wavespeed(const StateField& f, const PhiModel& phi) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    s = std::max(s, wave_speed(std::sqrt(f.u[i] * f.u[i] + f.v[i] * f.v[i]), phi));
  }
  return std::max(s, 1e-14);
}

StateField damping_substep(const StateField& f, const Damping& d, double dt) {
  if (dt < 0.0) throw Error(ErrorKind::ConfigError, "damping substep: dt must be nonnegative");
  StateField out = f;
  const double fu = std::exp(-d.a * dt);
  const double fv = std::exp(-d.b * dt);
  for (int i = 0; i < out.size(); ++i) {
    out.u[i] *= fu;
    out.v[i] *= fv;
  }
  return out;
}

StateField detail::flux_update(const StateField& f, const PhiModel& phi, double dt,
                               Scheme scheme, double eps) {
  const int n = f.size();
  const double dx = f.grid.dx();

  // Extended arrays with one ghost cell on each side.
  std::vector<double> uu(n + 2), vv(n + 2), fu(n + 2), fv(n + 2), sp(n + 2);
  for (int i = 0; i < n; ++i) {
    uu[i + 1] = f.u[i];
    vv[i + 1] = f.v[i];
  }
  if (f.grid.boundary == Boundary::Periodic) {
    uu[0] = f.u[n - 1];
    vv[0] = f.v[n - 1];
    uu[n + 1] = f.u[0];
    vv[n + 1] = f.v[0];
  } else {
    uu[0] = f.u[0];
    vv[0] = f.v[0];
    uu[n + 1] = f.u[n - 1];
    vv[n + 1] = f.v[n - 1];
  }
  double smax = 1e-14;
  for (int i = 0; i < n + 2; ++i) {
    const double r = std::sqrt(uu[i] * uu[i] + vv[i] * vv[i]);
    if (r == 0.0) {
      fu[i] = fv[i] = 0.0;
      sp[i] = wave_speed(0.0, phi);
    } else {
      const double p = phi.value(r);
      fu[i] = uu[i] * p;
      fv[i] = vv[i] * p;
      sp[i] = std::max(std::abs(p), std::abs(p + r * phi.d1(r)));
    }
    smax = std::max(smax, sp[i]);
  }

  const double courant = dt * smax / dx;
  const double mu = eps * dt / (dx * dx);
  if (courant > 1.0 + 1e-12) {
    throw Error(eps > 0.0 ? ErrorKind::StabilityViolation : ErrorKind::CFLViolation,
                "dt * max|lambda| / dx = " + std::to_string(courant) + " > 1");
  }
  if (mu > 0.5 + 1e-12) {
    throw Error(ErrorKind::StabilityViolation,
                "eps * dt / dx^2 = " + std::to_string(mu) + " > 1/2");
  }

  // Interface j sits between extended cells j and j + 1.
  std::vector<double> hu(n + 1), hv(n + 1);
  const double lf_speed = dx / dt;
  for (int j = 0; j <= n; ++j) {
    const double s = scheme == Scheme::Rusanov ? std::max(sp[j], sp[j + 1]) : lf_speed;
    hu[j] = 0.5 * (fu[j] + fu[j + 1]) - 0.5 * s * (uu[j + 1] - uu[j]);
    hv[j] = 0.5 * (fv[j] + fv[j + 1]) - 0.5 * s * (vv[j + 1] - vv[j]);
  }

  StateField out = f;
  const double lam = dt / dx;
  for (int i = 0; i < n; ++i) {
    out.u[i] = f.u[i] - lam * (hu[i + 1] - hu[i]);
    out.v[i] = f.v[i] - lam * (hv[i + 1] - hv[i]);
  }
  if (eps > 0.0) {
    for (int i = 0; i < n; ++i) {
      out.u[i] += mu * (uu[i + 2] - 2.0 * uu[i + 1] + uu[i]);
      out.v[i] += mu * (vv[i + 2] - 2.0 * vv[i + 1] + vv[i]);
    }
  }
  if (!out.finite()) throw Error(ErrorKind::NonFinite, "flux update produced NaN/Inf");
  return out;
}

StateField hyperbolic_substep(const StateField& f, const PhiModel& phi, double dt, Scheme scheme) {
  return detail::flux_update(f, phi, dt, scheme, 0.0);
}

Trajectory detail::integrate(const StateField& init, const PhiModel& phi, const Damping& d,
                             const SolverConfig& cfg, const StepLimits& limits) {
  cfg.validate();
  if (!(d.a >= 0.0) || !(d.b >= 0.0)) {
    throw Error(ErrorKind::ValidationError, "damping rates must be nonnegative");
  }
  if (!init.finite()) throw Error(ErrorKind::NonFinite, "initial data not finite");

  std::vector<double> outputs = cfg.output_times;
  if (outputs.empty()) outputs.push_back(cfg.t_end);
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());

  const double dx = init.grid.dx();
  const bool strang = cfg.splitting == Splitting::Strang;
  Trajectory traj;
  StateField cur = init;
  if (cfg.record_steps && outputs.front() > cur.t) traj.push_back(cur);
  for (double target : outputs) {
    if (target <= cur.t) {
      if (target == cur.t) traj.push_back(cur);
      continue;
    }
    while (cur.t < target) {
      const double remaining = target - cur.t;
      double dt = limits.cfl * dx / max_wavespeed(cur, phi);
      if (limits.eps > 0.0) dt = std::min(dt, limits.diffusion_number * dx * dx / limits.eps);
      bool last = dt >= remaining;
      if (last) dt = remaining;

      StateField first = damping_substep(cur, d, strang ? 0.5 * dt : dt);
      // Speeds can grow under damping when phi decreases in r.
      const double s1 = max_wavespeed(first, phi);
      if (s1 * dt / dx > 1.0) {
        dt = limits.cfl * dx / s1;
        last = false;
        first = damping_substep(cur, d, strang ? 0.5 * dt : dt);
      }
      StateField next = flux_update(first, phi, dt, cfg.scheme, limits.eps);
      if (strang) next = damping_substep(next, d, 0.5 * dt);
      if (!next.finite()) throw Error(ErrorKind::NonFinite, "solution blew up");
      next.t = last ? target : cur.t + dt;
      cur = std::move(next);
      if (cfg.record_steps && cur.t < target) traj.push_back(cur);
    }
    traj.push_back(cur);
  }
  return traj;
}

Trajectory simulate(const StateField& init, const PhiModel& phi, const Damping& d,
                    const SolverConfig& cfg) {
  return detail::integrate(init, phi, d, cfg, {cfg.cfl, 0.0, 0.5});
}

double bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

double bump_derivative(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double q = 1.0 - x * x;
  return bump(x) * (-2.0 * x / (q * q));
}

MollifiedField mollify_initial_data(const std::function<double(double)>& u0,
                                    const std::function<double(double)>& v0, double eps,
                                    const Grid1D& grid) {
  if (!(eps > 0.0)) throw Error(ErrorKind::ConfigError, "mollifier width must be positive");
  const StateField raw = StateField::sample(grid, u0, v0);
  const double dx = grid.dx();
  const int half = static_cast<int>(std::ceil(eps / dx));
  std::vector<double> w(2 * half + 1);
  double mass = 0.0;
  for (int k = -half; k <= half; ++k) {
    w[k + half] = bump(k * dx / eps);
    mass += w[k + half];
  }
  MollifiedField out{StateField(grid), eps < dx};
  for (double& x : w) x /= mass;
  const int n = grid.n_cells;
  for (int i = 0; i < n; ++i) {
    double su = 0.0, sv = 0.0;
    for (int k = -half; k <= half; ++k) {
      int j = i - k;
      if (grid.boundary == Boundary::Periodic) {
        j = ((j % n) + n) % n;
      } else {
        j = std::clamp(j, 0, n - 1);
      }
      su += w[k + half] * raw.u[j];
      sv += w[k + half] * raw.v[j];
    }
    out.field.u[i] = su;
    out.field.v[i] = sv;
  }
  return out;
}

}  // namespace kkd
