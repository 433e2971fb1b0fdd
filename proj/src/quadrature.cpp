#include "kkd/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "kkd/error.hpp"

namespace kkd {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double pair = f(c - dx) + f(c + dx);
    kron += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kron *= h;
  gauss *= h;
  if (!std::isfinite(kron)) {
    throw Error(ErrorKind::QuadratureFailure, "non-finite integrand on [" + std::to_string(a) +
                                                  ", " + std::to_string(b) + "]");
  }
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_intervals) {
  if (a == b) return {0.0, 0.0, 0};
  std::priority_queue<Panel> heap;
  const Panel first = kronrod15(f, a, b);
  heap.push(first);
  double total = first.value;
  double err = first.error;
  int count = 1;
  while (err > abs_tol) {
    if (count >= max_intervals) {
      throw Error(ErrorKind::QuadratureFailure,
                  "tolerance " + std::to_string(abs_tol) + " not reached (error estimate " +
                      std::to_string(err) + ")");
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorKind::QuadratureFailure, "interval collapsed below machine resolution");
    }
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the incremental updates.
  double sum = 0.0, esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return {sum, esum, count};
}

}  // namespace kkd
