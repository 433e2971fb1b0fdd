#pragma once

#include <functional>

namespace kkd {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // summed Kronrod error estimate
  int intervals = 0;
};

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b] with an absolute
// tolerance. Throws QuadratureFailure when the tolerance is not reached
// within max_intervals subdivisions or the integrand is non-finite.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_intervals = 2000);

}  // namespace kkd
