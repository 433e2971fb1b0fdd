#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "kkd/model.hpp"

namespace kkd::testing {

inline constexpr double kTwoPi = 6.283185307179586;

// Random states with both components in [lo, hi], optionally with random signs.
inline std::vector<State> random_states(std::uint64_t seed, int n, double lo, double hi,
                                        bool signs = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(lo, hi);
  std::bernoulli_distribution flip(0.5);
  std::vector<State> out;
  for (int i = 0; i < n; ++i) {
    State s{c(rng), c(rng)};
    if (signs && flip(rng)) s.u = -s.u;
    if (signs && flip(rng)) s.v = -s.v;
    out.push_back(s);
  }
  return out;
}

// Central-difference Jacobian of a map R^2 -> R^2.
template <class F>
Mat2 fd_jacobian(F&& f, const State& s, double h) {
  Mat2 J{};
  for (int col = 0; col < 2; ++col) {
    State p = s, m = s;
    (col == 0 ? p.u : p.v) += h;
    (col == 0 ? m.u : m.v) -= h;
    const Vec2 fp = f(p), fm = f(m);
    for (int row = 0; row < 2; ++row) J[row][col] = (fp[row] - fm[row]) / (2.0 * h);
  }
  return J;
}

// Central-difference gradient of a scalar map.
template <class F>
Vec2 fd_gradient(F&& f, const State& s, double h) {
  return {(f(State{s.u + h, s.v}) - f(State{s.u - h, s.v})) / (2.0 * h),
          (f(State{s.u, s.v + h}) - f(State{s.u, s.v - h})) / (2.0 * h)};
}

}  // namespace kkd::testing
