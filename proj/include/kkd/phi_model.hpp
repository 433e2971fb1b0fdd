#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace kkd {

// phi(r) = r^gamma
struct PowerLaw {
  double gamma = 1.0;
};

// phi(r) = c + r^gamma
struct ShiftedPower {
  double c = 0.0;
  double gamma = 1.0;
};

// phi(r) = c. Strict hyperbolicity fails everywhere; kept for the linear
// advection channel and as a negative control.
struct Constant {
  double c = 1.0;
};

// Monotone piecewise cubic (Fritsch-Carlson) through (r_i, phi_i).
struct Tabulated {
  std::vector<double> r;
  std::vector<double> phi;
  std::vector<double> slope;  // Hermite slopes at the nodes
  std::string source;         // file the table was read from, if any
};

// User-supplied phi with its first two derivatives.
struct Custom {
  std::string name;
  std::function<double(double)> phi;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

using PhiFamily = std::variant<PowerLaw, ShiftedPower, Constant, Tabulated, Custom>;

// Outcome of the sampled condition-C1 test: r*phi(r) -> 0 as r -> 0 and
// r*phi'(r) != 0 on (0, r_max].
struct ConditionC1 {
  bool holds = false;
  bool limit_ok = false;
  bool nondegenerate = false;
  double worst_r = 0.0;       // sample with the smallest |r phi'(r)|
  double worst_value = 0.0;   // |r phi'(r)| there
  double limit_value = 0.0;   // |r phi(r)| at the smallest probe radius
};

// Velocity function phi(r) on the validity range [0, r_max].
class PhiModel {
public:
  PhiModel(PhiFamily family, double r_max);

  static PhiModel power(double gamma, double r_max = 1e3);
  static PhiModel shifted(double c, double gamma, double r_max = 1e3);
  static PhiModel constant(double c, double r_max = 1e3);
  static PhiModel tabulated(std::vector<double> r, std::vector<double> phi,
                            std::string source = {});
  static PhiModel from_table_file(const std::string& path);
  static PhiModel custom(std::string name, std::function<double(double)> phi,
                         std::function<double(double)> d1, std::function<double(double)> d2,
                         double r_max);

  // Throw OutOfRange for r < 0 or r > r_max. At r = 0 these return the
  // one-sided limit, which may be +inf.
  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;

  double r_max() const noexcept { return r_max_; }
  const PhiFamily& family() const noexcept { return family_; }
  const ConditionC1& condition_c1() const noexcept { return c1_; }

  // phi(0+) is finite (needed for the r = 0 Jacobian limit).
  bool finite_at_zero() const;

  // Canonical spec string, e.g. "power:2" or "shifted:1,1".
  std::string describe() const;

private:
  void check_range(double r) const;
  [[noreturn, gnu::cold]] void range_error(double r) const;

  PhiFamily family_;
  double r_max_;
  ConditionC1 c1_;
};

// Parses "power:G", "shifted:C,G", "const:C" or "table:PATH".
PhiModel parse_phi_spec(const std::string& spec, double r_max);

ConditionC1 check_condition_c1(const PhiModel& phi, int n_samples = 1000);

// Sampled sup of phi over [0, r_hi].
double sup_phi(const PhiModel& phi, double r_hi, int n_samples = 2001);

}  // namespace kkd
