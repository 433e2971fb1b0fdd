#include "kkd/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kkd/error.hpp"

namespace kkd {

namespace {

// phi(r) = C0 on [0, r_max] by bisection; phi assumed increasing.
double invert_phi(const PhiModel& phi, double level) {
  double lo = 0.0, hi = phi.r_max();
  if (phi.value(hi) <= level) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi.value(mid) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void RegionSigma::validate(const PhiModel& phi) const {
  if (!(C1 >= 0.0) || !(C2 > C1)) {
    throw Error(ErrorKind::ValidationError, "region: need 0 <= C1 < C2");
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i <= 1000; ++i) {
    const double p = phi.value(phi.r_max() * i / 1000.0);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (!(C0 >= lo && C0 <= hi)) {
    throw Error(ErrorKind::ValidationError, "region: C0 outside the range of phi");
  }
}

bool contains(const State& s, const RegionSigma& sigma, const PhiModel& phi, double tol) {
  if (s.v == 0.0) throw Error(ErrorKind::AxisState, "region: Z = u/v undefined at v = 0");
  const double z = s.u / s.v;
  return phi.value(s.r()) <= sigma.C0 + tol && z >= sigma.C1 - tol && z <= sigma.C2 + tol;
}

const char* to_string(BoundaryPiece piece) {
  switch (piece) {
    case BoundaryPiece::WEqualsC0: return "W=C0";
    case BoundaryPiece::ZEqualsC1: return "Z=C1";
    case BoundaryPiece::ZEqualsC2: return "Z=C2";
  }
  return "?";
}

BoundaryFlowReport boundary_flow_check(const RegionSigma& sigma, const PhiModel& phi,
                                       const Damping& d, int n_samples) {
  if (!(d.a > d.b)) {
    throw Error(ErrorKind::ConfigError, "boundary flow check requires a > b (condition C2)");
  }
  if (n_samples < 1) throw Error(ErrorKind::ConfigError, "boundary flow check: n_samples < 1");
  sigma.validate(phi);
  BoundaryFlowReport rep;
  rep.r_boundary = invert_phi(phi, sigma.C0);
  const double r0 = rep.r_boundary;

  auto grad_w = [&](const State& s) -> Vec2 {
    const double r = s.r();
    const double k = phi.d1(r) / r;
    return {k * s.u, k * s.v};
  };
  auto grad_z = [](const State& s) -> Vec2 { return {1.0 / s.v, -s.u / (s.v * s.v)}; };

  auto finish = [&](BoundaryReport& br) {
    br.min_dot = std::numeric_limits<double>::infinity();
    br.max_dot = -br.min_dot;
    br.pass = true;
    br.pass_reversed_source = true;
    for (const auto& smp : br.samples) {
      br.min_dot = std::min(br.min_dot, smp.dot_source);
      br.max_dot = std::max(br.max_dot, smp.dot_source);
      if (smp.outward > 0.0) br.pass = false;
      // h = -g, so its outward component has the opposite sign
      if (-smp.outward > 0.0) br.pass_reversed_source = false;
    }
    rep.pieces.push_back(std::move(br));
  };

  // {W = C0}: outward normal +grad W, Z swept over [C1, C2].
  {
    BoundaryReport br{BoundaryPiece::WEqualsC0, {}, 0, 0, false, false};
    for (int i = 0; i < n_samples; ++i) {
      const double z = n_samples == 1 ? 0.5 * (sigma.C1 + sigma.C2)
                                      : sigma.C1 + (sigma.C2 - sigma.C1) * i / (n_samples - 1);
      const double norm = std::sqrt(1.0 + z * z);
      const State s{r0 * z / norm, r0 / norm};
      const Vec2 gw = grad_w(s);
      const Vec2 g{-d.a * s.u, -d.b * s.v};
      BoundarySample smp{s, gw[0] * g[0] + gw[1] * g[1], 0.0, 0.0};
      smp.dot_reversed = -smp.dot_source;
      smp.outward = smp.dot_source;
      if (!(phi.d1(r0) > 0.0)) rep.phi_increasing = false;
      br.samples.push_back(smp);
    }
    finish(br);
  }

  // {Z = C}: radii swept over (0, r0]; outward is -grad Z at C1, +grad Z at C2.
  for (const auto piece : {BoundaryPiece::ZEqualsC1, BoundaryPiece::ZEqualsC2}) {
    const double z = piece == BoundaryPiece::ZEqualsC1 ? sigma.C1 : sigma.C2;
    const double sign = piece == BoundaryPiece::ZEqualsC1 ? -1.0 : 1.0;
    const double norm = std::sqrt(1.0 + z * z);
    BoundaryReport br{piece, {}, 0, 0, false, false};
    for (int i = 1; i <= n_samples; ++i) {
      const double r = r0 * i / n_samples;
      const State s{r * z / norm, r / norm};
      const Vec2 gz = grad_z(s);
      const Vec2 g{-d.a * s.u, -d.b * s.v};
      BoundarySample smp{s, gz[0] * g[0] + gz[1] * g[1], 0.0, 0.0};
      smp.dot_reversed = -smp.dot_source;
      smp.outward = sign * smp.dot_source;
      br.samples.push_back(smp);
    }
    finish(br);
  }
  return rep;
}

ContainmentReport trajectory_containment(const Trajectory& traj, const RegionSigma& sigma,
                                         const PhiModel& phi, double tol) {
  ContainmentReport rep;
  for (const auto& f : traj) {
    bool violated_here = false;
    for (int i = 0; i < f.size(); ++i) {
      const State s = f.at(i);
      double viol = std::max(0.0, phi.value(s.r()) - sigma.C0);
      if (s.v == 0.0) {
        if (s.u != 0.0) {
          ++rep.axis_cells;
          viol = std::numeric_limits<double>::infinity();
        }
      } else {
        const double z = s.u / s.v;
        viol = std::max({viol, sigma.C1 - z, z - sigma.C2});
      }
      rep.max_violation = std::max(rep.max_violation, viol);
      if (viol > tol) {
        ++rep.violating_cells;
        violated_here = true;
      }
    }
    if (violated_here && rep.first_violation_time < 0.0) rep.first_violation_time = f.t;
  }
  return rep;
}

}  // namespace kkd
