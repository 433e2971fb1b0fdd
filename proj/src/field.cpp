#include "kkd/field.hpp"

#include <cmath>

#include "kkd/error.hpp"

namespace kkd {

Grid1D::Grid1D(double lo, double hi, int n, Boundary bc)
    : x_lo(lo), x_hi(hi), n_cells(n), boundary(bc) {
  if (n < 8) throw Error(ErrorKind::ConfigError, "grid: need at least 8 cells");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::ConfigError, "grid: need finite x_lo < x_hi");
  }
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> xs(n_cells);
  for (int i = 0; i < n_cells; ++i) xs[i] = center(i);
  return xs;
}

StateField::StateField(Grid1D g, double time)
    : grid(g), u(g.n_cells, 0.0), v(g.n_cells, 0.0), t(time) {}

StateField StateField::sample(const Grid1D& grid, const std::function<double(double)>& u0,
                              const std::function<double(double)>& v0) {
  StateField f(grid);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    f.u[i] = u0(x);
    f.v[i] = v0(x);
  }
  return f;
}

std::vector<double> StateField::r() const {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::hypot(u[i], v[i]);
  return out;
}

bool StateField::finite() const {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(v[i])) return false;
  }
  return true;
}

}  // namespace kkd
