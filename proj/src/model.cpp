#include "kkd/model.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "kkd/error.hpp"

namespace kkd {

void Damping::validate() const {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw Error(ErrorKind::ValidationError, "damping: rates a and b must be nonnegative");
  }
  if (a < b) {
    throw Error(ErrorKind::ValidationError,
                "damping: condition C2 violated, requires a >= b (got a = " + std::to_string(a) +
                    ", b = " + std::to_string(b) + ")");
  }
}

Vec2 flux(const State& s, const PhiModel& phi) {
  const double r = s.r();
  if (r > phi.r_max() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::OutOfRange, "flux: r = " + std::to_string(r) + " beyond r_max");
  }
  if (r == 0.0) return {0.0, 0.0};
  const double p = phi.value(r);
  return {s.u * p, s.v * p};
}

Mat2 jacobian(const State& s, const PhiModel& phi) {
  const double r = s.r();
  if (r == 0.0) {
    const double p0 = phi.value(0.0);
    if (!std::isfinite(p0)) {
      throw Error(ErrorKind::DegenerateState, "jacobian: phi(0+) is not finite");
    }
    return {{{p0, 0.0}, {0.0, p0}}};
  }
  const double p = phi.value(r);
  const double k = phi.d1(r) / r;
  return {{{p + s.u * s.u * k, s.u * s.v * k}, {s.v * s.u * k, p + s.v * s.v * k}}};
}

Eigenvalues eigenvalues(const State& s, const PhiModel& phi) {
  const double r = s.r();
  if (r == 0.0) {
    const double p0 = phi.value(0.0);
    if (!std::isfinite(p0)) {
      throw Error(ErrorKind::DegenerateState, "eigenvalues: phi(0+) is not finite");
    }
    return {p0, p0};
  }
  const double p = phi.value(r);
  return {p, p + r * phi.d1(r)};
}

Eigenvectors eigenvectors(const State& s) {
  const double r = s.r();
  if (r == 0.0) throw Error(ErrorKind::DegenerateState, "eigenvectors: zero state");
  if (s.v == 0.0) return {{0.0, 1.0}, {1.0, 0.0}, true};
  if (s.u == 0.0) return {{1.0, 0.0}, {0.0, 1.0}, true};
  // (1, -u/v) ~ sign(v) (v, -u) / r and (1, v/u) ~ sign(u) (u, v) / r
  const double sv = s.v > 0.0 ? 1.0 : -1.0;
  const double su = s.u > 0.0 ? 1.0 : -1.0;
  return {{sv * s.v / r, -sv * s.u / r}, {su * s.u / r, su * s.v / r}, false};
}

RiemannInvariants riemann_invariants(const State& s, const PhiModel& phi) {
  if (s.v == 0.0) throw Error(ErrorKind::AxisState, "riemann_invariants: Z = u/v undefined at v = 0");
  return {phi.value(s.r()), s.u / s.v};
}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::LinearlyDegenerate: return "linearly-degenerate";
    case FieldKind::GenuinelyNonlinear: return "genuinely-nonlinear";
    case FieldKind::Mixed: return "mixed";
  }
  return "?";
}

FieldClassification classify_field(const State& s, const PhiModel& phi, int field_index) {
  if (field_index != 1 && field_index != 2) {
    throw Error(ErrorKind::ConfigError, "classify_field: field index must be 1 or 2");
  }
  const double r = s.r();
  if (r == 0.0) throw Error(ErrorKind::DegenerateState, "classify_field: zero state");
  if (s.u == 0.0 || s.v == 0.0) {
    throw Error(ErrorKind::AxisState, "classify_field: eigenvectors singular on the axes");
  }
  const auto vecs = eigenvectors(s);
  const double d1 = phi.d1(r);
  FieldClassification out;
  out.field_index = field_index;
  if (field_index == 1) {
    // grad(lambda1) = phi'(r) (u, v) / r is radial; r1 is tangential.
    const Vec2 grad{d1 * s.u / r, d1 * s.v / r};
    out.gn_value = grad[0] * vecs.r1[0] + grad[1] * vecs.r1[1];
    out.gn_unnormalized = 0.0;
    out.kind = std::abs(out.gn_value) <= 1e-10 * std::abs(d1) ? FieldKind::LinearlyDegenerate
                                                              : FieldKind::GenuinelyNonlinear;
    return out;
  }
  // lambda2 = phi + r phi' depends on r only: grad(lambda2) = (2 phi' + r phi'') (u, v) / r.
  const double radial = 2.0 * d1 + r * phi.d2(r);
  const Vec2 grad{radial * s.u / r, radial * s.v / r};
  out.gn_value = grad[0] * vecs.r2[0] + grad[1] * vecs.r2[1];
  out.gn_unnormalized = radial * r / s.u;
  const double scale = 2.0 * std::abs(d1) + std::abs(r * phi.d2(r));
  out.kind = std::abs(radial) <= 1e-10 * scale ? FieldKind::LinearlyDegenerate
                                               : FieldKind::GenuinelyNonlinear;
  return out;
}

FieldKind classify_field_range(const PhiModel& phi, int field_index, double r_lo, double r_hi,
                               int n_samples) {
  bool any_ld = false, any_pos = false, any_neg = false;
  for (int i = 0; i < n_samples; ++i) {
    const double r = n_samples == 1 ? r_lo : r_lo + (r_hi - r_lo) * i / (n_samples - 1);
    // Direction is irrelevant for a radial phi; use the diagonal.
    const State s{r / std::sqrt(2.0), r / std::sqrt(2.0)};
    const auto c = classify_field(s, phi, field_index);
    if (c.kind == FieldKind::LinearlyDegenerate) {
      any_ld = true;
    } else {
      (c.gn_value > 0.0 ? any_pos : any_neg) = true;
    }
  }
  // a sign change means the field degenerates somewhere between samples
  const bool any_gn = any_pos || any_neg;
  if ((any_ld && any_gn) || (any_pos && any_neg)) return FieldKind::Mixed;
  return any_gn ? FieldKind::GenuinelyNonlinear : FieldKind::LinearlyDegenerate;
}

HyperbolicityReport check_strict_hyperbolicity(const PhiModel& phi, double r_lo, double r_hi,
                                               int n_samples) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo) || r_hi > phi.r_max() * (1.0 + 1e-12) || n_samples < 2) {
    throw Error(ErrorKind::ConfigError,
                "check_strict_hyperbolicity: need 0 < r_lo < r_hi <= r_max and n >= 2");
  }
  HyperbolicityReport rep;
  rep.n_samples = n_samples;
  rep.min_abs_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / (n_samples - 1);
    const double gap = std::abs(r * phi.d1(r));
    if (gap < rep.min_abs_gap) {
      rep.min_abs_gap = gap;
      rep.min_at = r;
    }
    if (gap == 0.0) ++rep.failing_samples;
  }
  rep.pass = rep.failing_samples == 0;
  return rep;
}

double wave_speed(double r, const PhiModel& phi) {
  if (r == 0.0) {
    const double p0 = phi.value(0.0);
    if (!std::isfinite(p0)) throw Error(ErrorKind::DegenerateState, "wave speed: phi(0+) infinite");
    return std::abs(p0);
  }
  const double p = phi.value(r);
  return std::max(std::abs(p), std::abs(p + r * phi.d1(r)));
}

}  // namespace kkd
