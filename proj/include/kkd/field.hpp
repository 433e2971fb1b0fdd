#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kkd/model.hpp"

namespace kkd {

enum class Boundary { Periodic, Outflow };

struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_cells = 8;
  Boundary boundary = Boundary::Periodic;

  Grid1D() = default;
  Grid1D(double lo, double hi, int n, Boundary bc);

  double dx() const noexcept { return (x_hi - x_lo) / n_cells; }
  double center(int i) const noexcept { return x_lo + (i + 0.5) * dx(); }
  std::vector<double> centers() const;
};

// Cell averages of (u, v) at time t.
struct StateField {
  Grid1D grid;
  std::vector<double> u;
  std::vector<double> v;
  double t = 0.0;

  StateField() = default;
  explicit StateField(Grid1D g, double time = 0.0);

  static StateField sample(const Grid1D& grid, const std::function<double(double)>& u0,
                           const std::function<double(double)>& v0);

  int size() const noexcept { return grid.n_cells; }
  State at(int i) const { return {u[i], v[i]}; }
  std::vector<double> r() const;
  bool finite() const;
};

using Trajectory = std::vector<StateField>;

}  // namespace kkd
