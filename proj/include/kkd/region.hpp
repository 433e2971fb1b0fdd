#pragma once

#include <string>
#include <vector>

#include "kkd/field.hpp"
#include "kkd/model.hpp"

namespace kkd {

// Sigma = { phi(r) <= C0, C1 <= u / v <= C2 }.
struct RegionSigma {
  double C0 = 1.0;
  double C1 = 0.0;
  double C2 = 1.0;

  // 0 <= C1 < C2 and C0 inside the sampled range of phi on [0, r_max].
  void validate(const PhiModel& phi) const;
};

// Throws AxisState when v = 0.
bool contains(const State& s, const RegionSigma& sigma, const PhiModel& phi, double tol = 1e-8);

enum class BoundaryPiece { WEqualsC0, ZEqualsC1, ZEqualsC2 };

const char* to_string(BoundaryPiece piece);

struct BoundarySample {
  State state;
  double dot_source = 0.0;   // grad(W or Z) . g,  g = (-a u, -b v)
  double dot_reversed = 0.0;    // grad(W or Z) . h,  h = (a u, b v)
  double outward = 0.0;      // g . outward normal direction (sign only matters)
};

struct BoundaryReport {
  BoundaryPiece piece;
  std::vector<BoundarySample> samples;
  double min_dot = 0.0;
  double max_dot = 0.0;
  // Source g points weakly inward (g . n_out <= 0) at every sample.
  bool pass = false;
  // Same test with the opposite orientation h = (a u, b v).
  bool pass_reversed_source = false;
};

struct BoundaryFlowReport {
  std::vector<BoundaryReport> pieces;
  bool phi_increasing = true;  // phi' > 0 on the sampled W-boundary radii
  double r_boundary = 0.0;     // radius where phi(r) = C0
};

// Samples the three boundary pieces in the first quadrant and records the
// flow direction of the damping source on each. Requires a > b.
BoundaryFlowReport boundary_flow_check(const RegionSigma& sigma, const PhiModel& phi,
                                       const Damping& d, int n_samples);

struct ContainmentReport {
  double max_violation = 0.0;  // positive: distance outside Sigma in (W, Z)
  double first_violation_time = -1.0;  // -1 when no sample exceeds tol
  int violating_cells = 0;
  int axis_cells = 0;  // v = 0 cells, counted as violations unless u = 0 too
};

ContainmentReport trajectory_containment(const Trajectory& traj, const RegionSigma& sigma,
                                         const PhiModel& phi, double tol = 1e-8);

}  // namespace kkd
