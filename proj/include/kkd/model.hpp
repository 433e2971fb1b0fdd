#pragma once

#include <array>
#include <cmath>

#include "kkd/phi_model.hpp"

namespace kkd {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

struct State {
  double u = 0.0;
  double v = 0.0;

  double r() const noexcept { return std::hypot(u, v); }
};

// Linear damping rates: u_t + ... + a u = 0, v_t + ... + b v = 0.
struct Damping {
  double a = 0.0;
  double b = 0.0;

  // Rates are nonnegative and a >= b (condition C2). The solver itself
  // accepts any nonnegative pair.
  void validate() const;
};

// F(u, v) = (u phi(r), v phi(r)); zero at the origin.
Vec2 flux(const State& s, const PhiModel& phi);

// A_ij = phi(r) delta_ij + w_i w_j phi'(r) / r, w = (u, v).
// At r = 0 returns phi(0+) I, or throws DegenerateState when phi(0+) is infinite.
Mat2 jacobian(const State& s, const PhiModel& phi);

struct Eigenvalues {
  double lambda1;  // phi(r), contact field
  double lambda2;  // phi(r) + r phi'(r), radial field
};

Eigenvalues eigenvalues(const State& s, const PhiModel& phi);

struct Eigenvectors {
  Vec2 r1;
  Vec2 r2;
  // Set when u = 0 or v = 0: the (1, .) directions are singular and the
  // limiting coordinate directions are returned instead.
  bool axis_state = false;
};

// Unit eigenvectors, r1 ~ (1, -u/v) tangential and r2 ~ (1, v/u) radial.
Eigenvectors eigenvectors(const State& s);

struct RiemannInvariants {
  double W;  // phi(r)
  double Z;  // u / v
};

RiemannInvariants riemann_invariants(const State& s, const PhiModel& phi);

enum class FieldKind { LinearlyDegenerate, GenuinelyNonlinear, Mixed };

const char* to_string(FieldKind kind);

struct FieldClassification {
  int field_index = 1;
  // grad(lambda_i) . r_i with the unit eigenvector of eigenvectors().
  double gn_value = 0.0;
  // Same product against the unnormalized r_2 = (1, v/u):
  //   (2 (u,v).grad phi + (u,v) H(phi) (u,v)^T) / u  =  (r/u) (2 phi' + r phi'').
  // Zero for field 1.
  double gn_unnormalized = 0.0;
  FieldKind kind = FieldKind::LinearlyDegenerate;
};

FieldClassification classify_field(const State& s, const PhiModel& phi, int field_index);

// Kind of a field over a radial range: Mixed when some samples are
// degenerate and others are not.
FieldKind classify_field_range(const PhiModel& phi, int field_index, double r_lo, double r_hi,
                               int n_samples);

struct HyperbolicityReport {
  bool pass = false;
  double min_abs_gap = 0.0;  // min |r phi'(r)| = min |lambda2 - lambda1|
  double min_at = 0.0;
  int failing_samples = 0;
  int n_samples = 0;
};

HyperbolicityReport check_strict_hyperbolicity(const PhiModel& phi, double r_lo, double r_hi,
                                               int n_samples);

// max(|lambda1|, |lambda2|) at radius r, with the r -> 0 limit at the origin.
double wave_speed(double r, const PhiModel& phi);

}  // namespace kkd
