#include "kkd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kkd/error.hpp"
#include "kkd/quadrature.hpp"
#include "kkd/solver.hpp"

namespace kkd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_0^t lambda2(r0 e^{-a s}) ds
double displacement(double r0, const PhiModel& phi, double a, double t, double tol) {
  if (t == 0.0) return 0.0;
  auto closed_form = [&](double c, double g) {
    const double amp = (1.0 + g) * std::pow(r0, g);
    const double decay = a * g * t;
    // (1 - e^{-x}) / x, stable near 0
    const double factor = decay < 1e-8 ? t * (1.0 - 0.5 * decay) : -std::expm1(-decay) / (a * g);
    return c * t + amp * factor;
  };
  const auto& fam = phi.family();
  if (const auto* p = std::get_if<PowerLaw>(&fam)) return closed_form(0.0, p->gamma);
  if (const auto* p = std::get_if<ShiftedPower>(&fam)) return closed_form(p->c, p->gamma);
  if (const auto* p = std::get_if<Constant>(&fam)) return p->c * t;
  auto lambda2 = [&](double s) {
    const double r = r0 * std::exp(-a * s);
    return r == 0.0 ? phi.value(0.0) : phi.value(r) + r * phi.d1(r);
  };
  return integrate(lambda2, 0.0, t, tol).value;
}

struct Foot {
  double xi;
  double lo, hi;  // bracket used
};

Foot solve_foot(const std::function<double(double)>& r0, const PhiModel& phi, double a, double x,
                double t, double tol) {
  auto F = [&](double xi) { return xi + displacement(r0(xi), phi, a, t, tol) - x; };
  const double guess = x - displacement(r0(x), phi, a, t, tol);
  double delta = std::max(1e-3, 0.5 * std::abs(x - guess));
  double lo = guess - delta, hi = guess + delta;
  double flo = F(lo), fhi = F(hi);
  int expansions = 0;
  while (!(flo <= 0.0 && fhi >= 0.0)) {
    if (++expansions > 60 || !std::isfinite(flo) || !std::isfinite(fhi)) {
      throw Error(ErrorKind::RootBracketFailure,
                  "characteristics: no foot bracket for x = " + std::to_string(x));
    }
    delta *= 2.0;
    if (flo > 0.0) {
      lo = guess - delta;
      flo = F(lo);
    }
    if (fhi < 0.0) {
      hi = guess + delta;
      fhi = F(hi);
    }
  }
  const double blo = lo, bhi = hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (F(mid) < 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), blo, bhi};
}

void scan_crossings(const std::function<double(double)>& r0, const PhiModel& phi, double a,
                    double t, double lo, double hi, const CharacteristicsOptions& opts) {
  if (!(hi > lo)) return;
  const int n = std::max(opts.n_scan, 2);
  std::vector<double> feet(n + 1), amp(n + 1);
  for (int i = 0; i <= n; ++i) {
    feet[i] = lo + (hi - lo) * i / n;
    amp[i] = r0(feet[i]);
  }
  for (int k = 1; k <= opts.n_scan_times; ++k) {
    const double s = t * k / opts.n_scan_times;
    double prev = -kInf;
    for (int i = 0; i <= n; ++i) {
      const double X = feet[i] + displacement(amp[i], phi, a, s, opts.quadrature_tol);
      if (!(X > prev)) {
        throw Error(ErrorKind::ShockFormed,
                    "characteristics cross before t = " + std::to_string(s) + " near xi = " +
                        std::to_string(feet[i]));
      }
      prev = X;
    }
  }
}

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

double WeightFunction::h(double x) const {
  const double y = x - center;
  return std::sqrt(1.0 + y * y);
}

double WeightFunction::h_prime(double x) const {
  const double y = x - center;
  return y / std::sqrt(1.0 + y * y);
}

double WeightFunction::h_second(double x) const {
  const double y = x - center;
  return 1.0 / std::pow(1.0 + y * y, 1.5);
}

double WeightFunction::k(double x) const { return std::exp(-h(x)); }

double WeightFunction::k_prime(double x) const { return -h_prime(x) * k(x); }

double lp_norm(const StateField& f, double p, const std::optional<WeightFunction>& w) {
  if (!(p >= 1.0)) throw Error(ErrorKind::ConfigError, "lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (int i = 0; i < f.size(); ++i) m = std::max(m, std::hypot(f.u[i], f.v[i]));
    return m;
  }
  const double dx = f.grid.dx();
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double r = std::hypot(f.u[i], f.v[i]);
    const double k = w ? w->k(f.grid.center(i)) : 1.0;
    s += std::pow(r, p) * k;
  }
  return std::pow(s * dx, 1.0 / p);
}

double exact_scalar_solution(const std::function<double(double)>& u0, double a, double b,
                             double x, double t) {
  return u0(x - a * t) * std::exp(-b * t);
}

double radial_characteristics_oracle(const std::function<double(double)>& r0,
                                     const PhiModel& phi, double a, double x, double t,
                                     const CharacteristicsOptions& opts) {
  if (t == 0.0) return r0(x);
  const Foot foot = solve_foot(r0, phi, a, x, t, opts.quadrature_tol);
  const auto [lo, hi] = opts.scan.value_or(std::make_pair(foot.lo, foot.hi));
  scan_crossings(r0, phi, a, t, lo, hi, opts);
  return r0(foot.xi) * std::exp(-a * t);
}

std::vector<double> radial_characteristics_profile(const std::function<double(double)>& r0,
                                                   const PhiModel& phi, double a,
                                                   std::span<const double> xs, double t,
                                                   const CharacteristicsOptions& opts) {
  std::vector<double> out(xs.size());
  if (t == 0.0) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = r0(xs[i]);
    return out;
  }
  double lo = kInf, hi = -kInf;
  const double decay = std::exp(-a * t);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Foot foot = solve_foot(r0, phi, a, xs[i], t, opts.quadrature_tol);
    lo = std::min(lo, foot.xi);
    hi = std::max(hi, foot.xi);
    out[i] = r0(foot.xi) * decay;
  }
  const auto [slo, shi] = opts.scan.value_or(std::make_pair(lo, hi));
  scan_crossings(r0, phi, a, t, slo, shi, opts);
  return out;
}

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::InsufficientData, "line fit needs at least two points");
  }
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InsufficientData, "line fit: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

DecayReport decay_harness(const Trajectory& traj, const PhiModel& phi, const Damping& d,
                          const DecayOptions& opts) {
  if (traj.size() < 5) {
    throw Error(ErrorKind::InsufficientData, "decay harness needs at least 5 output times");
  }
  DecayReport rep;
  rep.p = opts.p;
  double r_sup = 0.0;
  for (const auto& f : traj) {
    rep.times.push_back(f.t);
    rep.norms.push_back(lp_norm(f, opts.p, opts.weight));
    if (!(rep.norms.back() > 0.0)) {
      throw Error(ErrorKind::InsufficientData, "decay harness: zero norm at t = " + std::to_string(f.t));
    }
    r_sup = std::max(r_sup, lp_norm(f, kInf));
  }
  const double t0 = rep.times.front();
  const double T = rep.times.back();
  const double window_lo = std::max(opts.t_burn, t0 + opts.fit_start_fraction * (T - t0));
  std::vector<double> ft, fy;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    if (rep.times[i] >= window_lo - 1e-12 * T) {
      ft.push_back(rep.times[i]);
      fy.push_back(std::log(rep.norms[i]));
    }
  }
  const auto [slope, intercept] = fit_line(ft, fy);
  rep.fitted_rate = -slope;
  rep.K_est = std::exp(intercept - slope * 0.0) / rep.norms.front();

  const double lo = std::min(d.a, d.b);
  const double hi = std::max(d.a, d.b);
  const double M = sup_phi(phi, std::min(r_sup, phi.r_max()));
  rep.nominal_rate = M;
  const bool periodic = traj.front().grid.boundary == Boundary::Periodic;
  if (!opts.weight && periodic) {
    rep.theorem_rate = lo;
    rep.rate_basis = "min(a,b): periodic, unweighted";
  } else {
    // d/dt int r^m k <= (2 m M - m min(a,b)) int r^m k  from |q| <= 2 m M r^m, |k'| <= k
    rep.theorem_rate = lo - 2.0 * M;
    rep.rate_basis = "min(a,b) - 2 sup(phi): weighted chain";
  }
  rep.bound_ok = true;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double b = (1.0 + opts.tolerance) * rep.norms.front() *
                     std::exp(-rep.theorem_rate * (rep.times[i] - t0));
    rep.bound.push_back(b);
    if (rep.norms[i] > b) rep.bound_ok = false;
  }
  const double delta = std::max(0.05 * hi, 1e-3);
  rep.rate_lo = lo - delta;
  rep.rate_hi = hi + delta;
  rep.rate_ok = rep.fitted_rate >= rep.rate_lo && rep.fitted_rate <= rep.rate_hi;
  rep.pass = rep.bound_ok && rep.rate_ok;
  return rep;
}

double TestFunction::value(double x, double t) const {
  return bump((x - x0) / wx) * bump((t - t0) / wt);
}

double TestFunction::dx(double x, double t) const {
  return bump_derivative((x - x0) / wx) / wx * bump((t - t0) / wt);
}

double TestFunction::dt(double x, double t) const {
  return bump((x - x0) / wx) * bump_derivative((t - t0) / wt) / wt;
}

namespace {

constexpr double kGaussNodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGaussWeights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

}  // namespace

EntropyResidualReport entropy_residual(const Trajectory& traj, const EntropyPair& pair,
                                       const Damping& d, std::span<const TestFunction> tests,
                                       double tol_constant) {
  if (traj.size() < 2) throw Error(ErrorKind::InsufficientData, "entropy residual needs >= 2 snapshots");
  const Grid1D& g = traj.front().grid;
  const double t_lo = traj.front().t, t_hi = traj.back().t;
  for (const auto& th : tests) {
    if (th.x0 - th.wx <= g.x_lo || th.x0 + th.wx >= g.x_hi || th.t0 - th.wt <= t_lo ||
        th.t0 + th.wt >= t_hi || !(th.wx > 0.0) || !(th.wt > 0.0)) {
      throw Error(ErrorKind::TestFunctionSupport,
                  "test function at (" + std::to_string(th.x0) + ", " + std::to_string(th.t0) +
                      ") touches the space-time boundary");
    }
  }
  EntropyResidualReport rep;
  rep.dx = g.dx();
  rep.residuals.assign(tests.size(), 0.0);
  const int n = g.n_cells;

  // Cells and snapshots that any test function can see.
  double x_min = kInf, x_max = -kInf, s_min = kInf, s_max = -kInf;
  for (const auto& th : tests) {
    x_min = std::min(x_min, th.x0 - th.wx);
    x_max = std::max(x_max, th.x0 + th.wx);
    s_min = std::min(s_min, th.t0 - th.wt);
    s_max = std::max(s_max, th.t0 + th.wt);
  }
  const int j_lo = std::clamp(static_cast<int>(std::floor((x_min - g.x_lo) / rep.dx)), 0, n - 1);
  const int j_hi = std::clamp(static_cast<int>(std::ceil((x_max - g.x_lo) / rep.dx)), 0, n - 1);

  struct Cached {
    std::vector<double> eta, q, prod;
  };
  auto evaluate = [&](const StateField& f) {
    Cached c;
    c.eta.resize(n);
    c.q.resize(n);
    c.prod.resize(n);
    for (int j = j_lo; j <= j_hi; ++j) {
      const State s = f.at(j);
      c.eta[j] = pair.eta(s);
      c.q[j] = pair.q(s);
      c.prod[j] = pair.damping_production(s, d);
    }
    return c;
  };

  Cached prev;
  bool have_prev = false;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const double ta = traj[k].t, tb = traj[k + 1].t;
    const double tau = tb - ta;
    rep.dt = std::max(rep.dt, tau);
    if (tb <= s_min || ta >= s_max) {
      have_prev = false;
      continue;
    }
    if (!have_prev) prev = evaluate(traj[k]);
    Cached next = evaluate(traj[k + 1]);
    // Entropy quantities are interpolated linearly between snapshots and the
    // time integral is taken with 3-point Gauss on each interval.
    for (std::size_t m = 0; m < tests.size(); ++m) {
      const auto& th = tests[m];
      if (tb <= th.t0 - th.wt || ta >= th.t0 + th.wt) continue;
      double acc = 0.0;
      for (int gq = 0; gq < 3; ++gq) {
        const double sigma = 0.5 * (1.0 + kGaussNodes[gq]);
        const double t = ta + sigma * tau;
        const double weight = 0.5 * kGaussWeights[gq];
        for (int j = j_lo; j <= j_hi; ++j) {
          const double x = g.center(j);
          if (std::abs(x - th.x0) >= th.wx) continue;
          const double eta = (1.0 - sigma) * prev.eta[j] + sigma * next.eta[j];
          const double q = (1.0 - sigma) * prev.q[j] + sigma * next.q[j];
          const double prod = (1.0 - sigma) * prev.prod[j] + sigma * next.prod[j];
          acc += weight * (eta * th.dt(x, t) + q * th.dx(x, t) - prod * th.value(x, t));
        }
      }
      rep.residuals[m] -= acc * rep.dx * tau;
    }
    prev = std::move(next);
    have_prev = true;
  }
  rep.max_residual = tests.empty() ? 0.0 : *std::max_element(rep.residuals.begin(), rep.residuals.end());
  rep.tol_scheme = tol_constant * (rep.dx + rep.dt);
  rep.pass = rep.max_residual <= rep.tol_scheme;
  return rep;
}

RiemannInvariantReport riemann_invariant_diagnostics(const Trajectory& traj, const PhiModel& phi,
                                                     const Damping& d, double tolerance) {
  if (traj.empty()) throw Error(ErrorKind::InsufficientData, "empty trajectory");
  RiemannInvariantReport rep;
  for (const auto& f : traj) {
    double zmax = 0.0, wmax = -kInf;
    for (int i = 0; i < f.size(); ++i) {
      const auto ri = riemann_invariants(f.at(i), phi);
      zmax = std::max(zmax, std::abs(ri.Z));
      wmax = std::max(wmax, ri.W);
    }
    rep.times.push_back(f.t);
    rep.sup_abs_z.push_back(zmax);
    rep.sup_w.push_back(wmax);
  }
  const double t0 = rep.times.front();
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double pred = rep.sup_abs_z.front() * std::exp(-(d.a - d.b) * (rep.times[i] - t0));
    rep.predicted_sup_abs_z.push_back(pred);
    if (pred > 0.0) {
      rep.max_z_deviation = std::max(rep.max_z_deviation, std::abs(rep.sup_abs_z[i] - pred) / pred);
    }
    const double w0 = std::abs(rep.sup_w.front());
    rep.max_w_excess = std::max(rep.max_w_excess,
                                (rep.sup_w[i] - rep.sup_w.front()) / (w0 > 0.0 ? w0 : 1.0));
  }
  if (rep.times.size() >= 2 && rep.sup_abs_z.front() > 0.0) {
    std::vector<double> logs;
    for (double z : rep.sup_abs_z) logs.push_back(std::log(z));
    rep.fitted_z_rate = -fit_line(rep.times, logs).first;
  }
  rep.pass = rep.max_z_deviation <= tolerance && rep.max_w_excess <= tolerance;
  return rep;
}

std::vector<double> energy_balance(const Trajectory& traj, const Damping& d) {
  std::vector<double> out;
  auto integrals = [&](const StateField& f) {
    double e = 0.0, s = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      e += f.u[i] * f.u[i] + f.v[i] * f.v[i];
      s += d.a * f.u[i] * f.u[i] + d.b * f.v[i] * f.v[i];
    }
    return std::make_pair(e * f.grid.dx(), s * f.grid.dx());
  };
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const auto [ea, sa] = integrals(traj[k]);
    const auto [eb, sb] = integrals(traj[k + 1]);
    const double tau = traj[k + 1].t - traj[k].t;
    out.push_back((eb - ea) / tau + (sa + sb));
  }
  return out;
}

WeightedChainReport weighted_entropy_chain(const Trajectory& traj, const EntropyPair& pair,
                                           const PhiModel& phi, const Damping& d,
                                           const WeightFunction& w) {
  if (!pair.m()) throw Error(ErrorKind::ConfigError, "weighted chain needs a power-family pair");
  WeightedChainReport rep;
  rep.max_balance_excess = -kInf;
  rep.max_gronwall_excess = -kInf;
  double r_sup = 0.0;
  for (const auto& f : traj) r_sup = std::max(r_sup, lp_norm(f, kInf));
  rep.M = sup_phi(phi, std::min(r_sup, phi.r_max()));
  const double m = *pair.m();

  struct Sums {
    double eta_k, q_kp, prod_k;
  };
  auto sums = [&](const StateField& f) {
    Sums s{0.0, 0.0, 0.0};
    for (int i = 0; i < f.size(); ++i) {
      const double x = f.grid.center(i);
      const State st = f.at(i);
      s.eta_k += pair.eta(st) * w.k(x);
      s.q_kp += pair.q(st) * w.k_prime(x);
      s.prod_k += pair.damping_production(st, d) * w.k(x);
    }
    const double dx = f.grid.dx();
    return Sums{s.eta_k * dx, s.q_kp * dx, s.prod_k * dx};
  };
  if (traj.size() < 2) return rep;
  Sums a = sums(traj.front());
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const Sums b = sums(traj[k + 1]);
    const double tau = traj[k + 1].t - traj[k].t;
    const double lhs = (b.eta_k - a.eta_k) / tau;
    const double rhs = 0.5 * (a.q_kp + b.q_kp) - 0.5 * (a.prod_k + b.prod_k);
    rep.max_balance_excess = std::max(rep.max_balance_excess, lhs - rhs);
    const double gronwall =
        m * (2.0 * rep.M - std::min(d.a, d.b)) * 0.5 * (a.eta_k + b.eta_k);
    rep.max_gronwall_excess = std::max(rep.max_gronwall_excess, lhs - gronwall);
    a = b;
  }
  return rep;
}

}  // namespace kkd
