#include "kkd/phi_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "kkd/error.hpp"

namespace kkd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Fritsch-Carlson slopes; keeps the interpolant monotone on monotone data.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    m[0] = m[1] = delta[0];
    return m;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      m[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) {
      s = 0.0;
    } else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) {
      s = 3.0 * d0;
    }
    return s;
  };
  m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return m;
}

struct HermiteEval {
  double value, d1, d2;
};

HermiteEval eval_table(const Tabulated& t, double r) {
  const auto& xs = t.r;
  std::size_t k = 0;
  if (r >= xs.back()) {
    k = xs.size() - 2;
  } else if (r > xs.front()) {
    k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), r) - xs.begin()) - 1;
  }
  const double h = xs[k + 1] - xs[k];
  const double s = (r - xs[k]) / h;
  const double y0 = t.phi[k], y1 = t.phi[k + 1];
  const double m0 = t.slope[k] * h, m1 = t.slope[k + 1] * h;
  const double s2 = s * s, s3 = s2 * s;
  HermiteEval e{};
  e.value = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
            (s3 - s2) * m1;
  e.d1 = ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 +
          (3 * s2 - 2 * s) * m1) / h;
  e.d2 = ((12 * s - 6) * y0 + (6 * s - 4) * m0 + (-12 * s + 6) * y1 + (6 * s - 2) * m1) /
         (h * h);
  return e;
}

// d^k/dr^k r^g at r >= 0, with the one-sided limit at 0.
double power_derivative(double g, int k, double r) {
  double coeff = 1.0;
  for (int j = 0; j < k; ++j) coeff *= (g - j);
  if (coeff == 0.0) return 0.0;
  const double e = g - k;
  if (r == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return coeff;
    return coeff > 0 ? kInf : -kInf;
  }
  if (e == 0.0) return coeff;
  if (e == 1.0) return coeff * r;
  if (e == 2.0) return coeff * r * r;
  return coeff * std::pow(r, e);
}

}  // namespace

PhiModel::PhiModel(PhiFamily family, double r_max) : family_(std::move(family)), r_max_(r_max) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw Error(ErrorKind::ConfigError, "phi: r_max must be positive and finite");
  }
  if (const auto* p = std::get_if<PowerLaw>(&family_); p && !(p->gamma > 0.0)) {
    throw Error(ErrorKind::ConfigError, "phi: power-law exponent must be positive");
  }
  if (const auto* p = std::get_if<ShiftedPower>(&family_); p && (!(p->c >= 0.0) || !(p->gamma > 0.0))) {
    throw Error(ErrorKind::ConfigError, "phi: shifted power needs c >= 0 and gamma > 0");
  }
  if (const auto* t = std::get_if<Tabulated>(&family_)) {
    if (r_max > t->r.back()) {
      throw Error(ErrorKind::ConfigError, "phi: r_max beyond the last table row");
    }
  }
  c1_ = check_condition_c1(*this);
}

PhiModel PhiModel::power(double gamma, double r_max) { return {PowerLaw{gamma}, r_max}; }

PhiModel PhiModel::shifted(double c, double gamma, double r_max) {
  return {ShiftedPower{c, gamma}, r_max};
}

PhiModel PhiModel::constant(double c, double r_max) { return {Constant{c}, r_max}; }

PhiModel PhiModel::tabulated(std::vector<double> r, std::vector<double> phi, std::string source) {
  if (r.size() != phi.size() || r.size() < 2) {
    throw Error(ErrorKind::ConfigError, "phi table: need at least two (r, phi) rows");
  }
  if (r.front() < 0.0) throw Error(ErrorKind::ConfigError, "phi table: r must be nonnegative");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) {
      throw Error(ErrorKind::ConfigError, "phi table: r must be strictly increasing");
    }
  }
  for (double y : phi) {
    if (!std::isfinite(y)) throw Error(ErrorKind::ConfigError, "phi table: non-finite value");
  }
  Tabulated t;
  t.slope = pchip_slopes(r, phi);
  t.r = std::move(r);
  t.phi = std::move(phi);
  t.source = std::move(source);
  const double r_max = t.r.back();
  return {std::move(t), r_max};
}

PhiModel PhiModel::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot open phi table '" + path + "'");
  std::vector<double> r, phi;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a = 0, b = 0;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) {
      throw Error(ErrorKind::ParseError,
                  path + ":" + std::to_string(lineno) + ": expected two columns (r, phi)");
    }
    r.push_back(a);
    phi.push_back(b);
  }
  return tabulated(std::move(r), std::move(phi), path);
}

PhiModel PhiModel::custom(std::string name, std::function<double(double)> phi,
                          std::function<double(double)> d1, std::function<double(double)> d2,
                          double r_max) {
  return {Custom{std::move(name), std::move(phi), std::move(d1), std::move(d2)}, r_max};
}

void PhiModel::check_range(double r) const {
  if (!(r >= 0.0) || r > r_max_ * (1.0 + 1e-12)) [[unlikely]] {
    range_error(r);
  }
}

void PhiModel::range_error(double r) const {
  throw Error(ErrorKind::OutOfRange,
              "r = " + fmt_num(r) + " outside [0, " + fmt_num(r_max_) + "] for phi " + describe());
}

double PhiModel::value(double r) const {
  check_range(r);
  return std::visit(
      [r](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return power_derivative(f.gamma, 0, r);
        } else if constexpr (std::is_same_v<T, ShiftedPower>) {
          return f.c + power_derivative(f.gamma, 0, r);
        } else if constexpr (std::is_same_v<T, Constant>) {
          return f.c;
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return eval_table(f, r).value;
        } else {
          return f.phi(r);
        }
      },
      family_);
}

double PhiModel::d1(double r) const {
  check_range(r);
  return std::visit(
      [r](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw> || std::is_same_v<T, ShiftedPower>) {
          return power_derivative(f.gamma, 1, r);
        } else if constexpr (std::is_same_v<T, Constant>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return eval_table(f, r).d1;
        } else {
          return f.d1(r);
        }
      },
      family_);
}

double PhiModel::d2(double r) const {
  check_range(r);
  return std::visit(
      [r](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw> || std::is_same_v<T, ShiftedPower>) {
          return power_derivative(f.gamma, 2, r);
        } else if constexpr (std::is_same_v<T, Constant>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return eval_table(f, r).d2;
        } else {
          return f.d2(r);
        }
      },
      family_);
}

bool PhiModel::finite_at_zero() const { return std::isfinite(value(0.0)); }

std::string PhiModel::describe() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return "power:" + fmt_num(f.gamma);
        } else if constexpr (std::is_same_v<T, ShiftedPower>) {
          return "shifted:" + fmt_num(f.c) + "," + fmt_num(f.gamma);
        } else if constexpr (std::is_same_v<T, Constant>) {
          return "const:" + fmt_num(f.c);
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return "table:" + (f.source.empty() ? std::string("<memory>") : f.source);
        } else {
          return "custom:" + f.name;
        }
      },
      family_);
}

PhiModel parse_phi_spec(const std::string& spec, double r_max) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  auto numbers = [&](std::size_t expected) {
    std::vector<double> out;
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double x = 0;
      try {
        x = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) {
        throw Error(ErrorKind::ParseError, "phi spec '" + spec + "': bad number '" + item + "'");
      }
      out.push_back(x);
    }
    if (out.size() != expected) {
      throw Error(ErrorKind::ParseError, "phi spec '" + spec + "': expected " +
                                             std::to_string(expected) + " parameter(s)");
    }
    return out;
  };
  if (family == "power") return PhiModel::power(numbers(1)[0], r_max);
  if (family == "shifted") {
    const auto p = numbers(2);
    return PhiModel::shifted(p[0], p[1], r_max);
  }
  if (family == "const") return PhiModel::constant(numbers(1)[0], r_max);
  if (family == "table") {
    if (args.empty()) throw Error(ErrorKind::ParseError, "phi spec 'table:' needs a path");
    auto table = PhiModel::from_table_file(args);
    if (r_max < table.r_max()) return PhiModel(table.family(), r_max);
    return table;
  }
  throw Error(ErrorKind::ParseError, "unknown phi family '" + family + "' in '" + spec + "'");
}

ConditionC1 check_condition_c1(const PhiModel& phi, int n_samples) {
  ConditionC1 rep;
  const double r_max = phi.r_max();

  // r phi(r) -> 0: probe a geometric ladder toward the origin.
  double last = kInf;
  bool shrinking = true;
  for (int k = 3; k <= 12; ++k) {
    const double r = r_max * std::pow(10.0, -k);
    const double g = std::abs(r * phi.value(r));
    if (!std::isfinite(g) || g > last * (1.0 + 1e-9) + 1e-300) shrinking = false;
    last = g;
  }
  rep.limit_value = last;
  const double scale = std::max(1.0, std::abs(r_max * phi.value(r_max)));
  rep.limit_ok = shrinking && last <= 1e-6 * scale;

  double max_abs = 0.0;
  rep.worst_value = kInf;
  for (int i = 1; i <= n_samples; ++i) {
    const double r = r_max * static_cast<double>(i) / n_samples;
    const double g = std::abs(r * phi.d1(r));
    max_abs = std::max(max_abs, g);
    if (g < rep.worst_value) {
      rep.worst_value = g;
      rep.worst_r = r;
    }
  }
  rep.nondegenerate = max_abs > 0.0 && rep.worst_value > 1e-12 * max_abs;
  rep.holds = rep.limit_ok && rep.nondegenerate;
  return rep;
}

double sup_phi(const PhiModel& phi, double r_hi, int n_samples) {
  double best = -kInf;
  for (int i = 0; i < n_samples; ++i) {
    const double r = r_hi * static_cast<double>(i) / (n_samples - 1);
    best = std::max(best, phi.value(r));
  }
  return best;
}

}  // namespace kkd
