#include "kkd/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "kkd/error.hpp"
#include "kkd/io.hpp"
#include "kkd/viscous.hpp"

namespace kkd {

namespace {

struct Token {
  std::string text;
  std::string where;  // origin:line:column of the value
};

[[noreturn]] void parse_fail(const Token& tok, const std::string& msg) {
  throw Error(ErrorKind::ParseError, tok.where + ": " + msg);
}

double to_double(const Token& tok) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(tok.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.text.size()) parse_fail(tok, "expected a number, got '" + tok.text + "'");
  return x;
}

int to_int(const Token& tok) {
  const double x = to_double(tok);
  if (x != std::floor(x) || std::abs(x) > 1e9) parse_fail(tok, "expected an integer");
  return static_cast<int>(x);
}

bool to_bool(const Token& tok) {
  if (tok.text == "true" || tok.text == "1" || tok.text == "yes" || tok.text == "on") return true;
  if (tok.text == "false" || tok.text == "0" || tok.text == "no" || tok.text == "off") return false;
  parse_fail(tok, "expected true/false, got '" + tok.text + "'");
}

std::vector<double> to_list(const Token& tok) {
  std::vector<double> out;
  std::stringstream ss(tok.text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a == std::string::npos) parse_fail(tok, "empty list item");
    out.push_back(to_double({item.substr(a, b - a + 1), tok.where}));
  }
  if (out.empty()) parse_fail(tok, "expected a comma-separated list");
  return out;
}

State to_state(const Token& tok) {
  const auto xs = to_list(tok);
  if (xs.size() != 2) parse_fail(tok, "expected a state 'u,v'");
  return {xs[0], xs[1]};
}

using Setter = std::function<void(Scenario&, const Token&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](Scenario& s, const Token& t) { s.name = t.text; }},
      {"seed", [](Scenario& s, const Token& t) { s.seed = static_cast<std::uint64_t>(to_int(t)); }},
      {"phi", [](Scenario& s, const Token& t) {
         // validated later; the family name is checked here
         const auto fam = t.text.substr(0, t.text.find(':'));
         if (fam != "power" && fam != "shifted" && fam != "const" && fam != "table") {
           parse_fail(t, "unknown phi family '" + fam + "'");
         }
         s.phi_spec = t.text;
       }},
      {"phi.r_max", [](Scenario& s, const Token& t) { s.r_max = to_double(t); }},
      {"damping.a", [](Scenario& s, const Token& t) { s.damping.a = to_double(t); }},
      {"damping.b", [](Scenario& s, const Token& t) { s.damping.b = to_double(t); }},
      {"grid.x_lo", [](Scenario& s, const Token& t) { s.grid.x_lo = to_double(t); }},
      {"grid.x_hi", [](Scenario& s, const Token& t) { s.grid.x_hi = to_double(t); }},
      {"grid.n_cells", [](Scenario& s, const Token& t) { s.grid.n_cells = to_int(t); }},
      {"grid.boundary", [](Scenario& s, const Token& t) {
         if (t.text == "periodic") s.grid.boundary = Boundary::Periodic;
         else if (t.text == "outflow") s.grid.boundary = Boundary::Outflow;
         else parse_fail(t, "boundary must be periodic or outflow");
       }},
      {"initial.profile", [](Scenario& s, const Token& t) {
         if (t.text == "constant") s.initial.kind = ProfileKind::Constant;
         else if (t.text == "sine_radial") s.initial.kind = ProfileKind::SineRadial;
         else if (t.text == "riemann_step") s.initial.kind = ProfileKind::RiemannStep;
         else if (t.text == "file") s.initial.kind = ProfileKind::FromFile;
         else parse_fail(t, "unknown initial profile '" + t.text + "'");
       }},
      {"initial.state", [](Scenario& s, const Token& t) { s.initial.constant = to_state(t); }},
      {"initial.mean", [](Scenario& s, const Token& t) { s.initial.mean = to_double(t); }},
      {"initial.amplitude", [](Scenario& s, const Token& t) { s.initial.amplitude = to_double(t); }},
      {"initial.wavenumber", [](Scenario& s, const Token& t) { s.initial.wavenumber = to_double(t); }},
      {"initial.angle", [](Scenario& s, const Token& t) { s.initial.angle = to_double(t); }},
      {"initial.angle_amplitude", [](Scenario& s, const Token& t) { s.initial.angle_amplitude = to_double(t); }},
      {"initial.left", [](Scenario& s, const Token& t) { s.initial.left = to_state(t); }},
      {"initial.right", [](Scenario& s, const Token& t) { s.initial.right = to_state(t); }},
      {"initial.x_step", [](Scenario& s, const Token& t) { s.initial.x_step = to_double(t); }},
      {"initial.file", [](Scenario& s, const Token& t) { s.initial.file = t.text; }},
      {"initial.mollify_eps", [](Scenario& s, const Token& t) { s.initial.mollify_eps = to_double(t); }},
      {"solver.scheme", [](Scenario& s, const Token& t) {
         if (t.text == "rusanov") s.solver.scheme = Scheme::Rusanov;
         else if (t.text == "lax_friedrichs") s.solver.scheme = Scheme::LaxFriedrichs;
         else parse_fail(t, "scheme must be rusanov or lax_friedrichs");
       }},
      {"solver.cfl", [](Scenario& s, const Token& t) { s.solver.cfl = to_double(t); }},
      {"solver.splitting", [](Scenario& s, const Token& t) {
         if (t.text == "strang") s.solver.splitting = Splitting::Strang;
         else if (t.text == "lie") s.solver.splitting = Splitting::Lie;
         else parse_fail(t, "splitting must be strang or lie");
       }},
      {"solver.t_end", [](Scenario& s, const Token& t) { s.solver.t_end = to_double(t); }},
      {"solver.output_times", [](Scenario& s, const Token& t) { s.solver.output_times = to_list(t); }},
      {"solver.n_outputs", [](Scenario& s, const Token& t) {
         const int n = to_int(t);
         if (n < 2) parse_fail(t, "n_outputs must be >= 2");
         s.raw["solver.n_outputs"] = t.text;
       }},
      {"solver.record_steps", [](Scenario& s, const Token& t) { s.solver.record_steps = to_bool(t); }},
      {"solver.write_snapshots", [](Scenario& s, const Token& t) { s.write_snapshots = to_bool(t); }},
      {"viscous.eps", [](Scenario& s, const Token& t) { s.viscosity = to_double(t); }},
      {"viscous.diffusion_number", [](Scenario& s, const Token& t) { s.diffusion_number = to_double(t); }},
      {"analysis.decay", [](Scenario& s, const Token& t) {
         if (to_bool(t)) { if (!s.decay) s.decay.emplace(); } else { s.decay.reset(); }
       }},
      {"analysis.decay.p", [](Scenario& s, const Token& t) {
         if (!s.decay) s.decay.emplace();
         s.decay->p = to_list(t);
       }},
      {"analysis.decay.weighted", [](Scenario& s, const Token& t) {
         if (!s.decay) s.decay.emplace();
         s.decay->weighted = to_bool(t);
       }},
      {"analysis.decay.expected_rate", [](Scenario& s, const Token& t) {
         if (!s.decay) s.decay.emplace();
         s.decay->expected_rate = to_double(t);
       }},
      {"analysis.decay.rate_tolerance", [](Scenario& s, const Token& t) {
         if (!s.decay) s.decay.emplace();
         s.decay->rate_tolerance = to_double(t);
       }},
      {"analysis.region", [](Scenario& s, const Token& t) {
         if (to_bool(t)) { if (!s.region) s.region.emplace(); } else { s.region.reset(); }
       }},
      {"region.C0", [](Scenario& s, const Token& t) { if (!s.region) s.region.emplace(); s.region->C0 = to_double(t); }},
      {"region.C1", [](Scenario& s, const Token& t) { if (!s.region) s.region.emplace(); s.region->C1 = to_double(t); }},
      {"region.C2", [](Scenario& s, const Token& t) { if (!s.region) s.region.emplace(); s.region->C2 = to_double(t); }},
      {"region.tol", [](Scenario& s, const Token& t) { s.region_tol = to_double(t); }},
      {"analysis.riemann", [](Scenario& s, const Token& t) {
         if (to_bool(t)) { if (!s.riemann_tolerance) s.riemann_tolerance = 5e-2; } else { s.riemann_tolerance.reset(); }
       }},
      {"analysis.riemann.tolerance", [](Scenario& s, const Token& t) { s.riemann_tolerance = to_double(t); }},
      {"analysis.linf", [](Scenario& s, const Token& t) { s.linf_check = to_bool(t); }},
      {"analysis.entropy", [](Scenario& s, const Token& t) {
         if (to_bool(t)) { if (!s.entropy) s.entropy.emplace(); } else { s.entropy.reset(); }
       }},
      {"analysis.entropy.m", [](Scenario& s, const Token& t) { if (!s.entropy) s.entropy.emplace(); s.entropy->m = to_double(t); }},
      {"analysis.entropy.tol_constant", [](Scenario& s, const Token& t) { if (!s.entropy) s.entropy.emplace(); s.entropy->tol_constant = to_double(t); }},
      {"analysis.oracle", [](Scenario& s, const Token& t) {
         if (to_bool(t)) { if (!s.oracle) s.oracle.emplace(); } else { s.oracle.reset(); }
       }},
      {"analysis.oracle.max_l1", [](Scenario& s, const Token& t) { if (!s.oracle) s.oracle.emplace(); s.oracle->max_l1 = to_double(t); }},
  };
  return table;
}

std::string trim(const std::string& s, std::size_t& offset) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) {
    offset = s.size();
    return {};
  }
  const auto b = s.find_last_not_of(" \t\r");
  offset = a;
  return s.substr(a, b - a + 1);
}

std::function<double(double)> sine_r(const InitialProfile& p) {
  return [p](double x) { return p.mean + p.amplitude * std::sin(p.wavenumber * x); };
}

std::function<double(double)> sine_angle(const InitialProfile& p) {
  return [p](double x) { return p.angle + p.angle_amplitude * std::sin(p.wavenumber * x); };
}

}  // namespace

PhiModel Scenario::phi() const { return parse_phi_spec(phi_spec, r_max); }

void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); };
  try {
    (void)phi();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    fail(std::string("phi: ") + e.what());
  }
  damping.validate();
  try {
    Grid1D check(grid.x_lo, grid.x_hi, grid.n_cells, grid.boundary);
  } catch (const Error& e) {
    fail(std::string("grid: ") + e.what());
  }
  solver.validate();
  if (!(viscosity >= 0.0)) fail("viscous.eps must be nonnegative");
  if (!(diffusion_number > 0.0 && diffusion_number <= 0.5)) fail("viscous.diffusion_number must lie in (0, 0.5]");
  if (initial.kind == ProfileKind::FromFile && initial.file.empty()) fail("initial.file is required for profile = file");
  if (initial.mollify_eps < 0.0) fail("initial.mollify_eps must be nonnegative");
  if (region) region->validate(phi());
  if (decay) {
    for (double p : decay->p) {
      if (!(p >= 1.0)) fail("analysis.decay.p entries must be >= 1");
    }
  }
  if (oracle && damping.a != damping.b) fail("analysis.oracle needs equal damping (a = b)");
  if (oracle && initial.kind != ProfileKind::SineRadial) fail("analysis.oracle needs profile = sine_radial");
  if (entropy && !(entropy->m >= 1.0)) fail("analysis.entropy.m must be >= 1");
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Scenario sc;
  sc.source = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::optional<int> n_outputs;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t off = 0;
    if (trim(line, off).empty()) continue;
    const auto eq = line.find('=');
    const std::string at = origin + ":" + std::to_string(lineno) + ":";
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ParseError, at + std::to_string(off + 1) + ": expected 'key = value'");
    }
    std::size_t koff = 0, voff = 0;
    const std::string key = trim(line.substr(0, eq), koff);
    const std::string value = trim(line.substr(eq + 1), voff);
    const Token tok{value, at + std::to_string(eq + 1 + voff + 1)};
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorKind::ParseError, at + std::to_string(koff + 1) + ": unknown key '" + key + "'");
    }
    if (value.empty()) parse_fail(tok, "missing value for '" + key + "'");
    it->second(sc, tok);
    sc.raw[key] = value;
    if (key == "solver.n_outputs") n_outputs = to_int(tok);
  }
  if (n_outputs) {
    sc.solver.output_times.clear();
    for (int i = 0; i < *n_outputs; ++i) {
      sc.solver.output_times.push_back(sc.solver.t_end * i / (*n_outputs - 1));
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot open scenario '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Scenario sc = parse_scenario(ss.str(), path.string());
  // Relative data paths resolve against the scenario's directory.
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) {
      p = (path.parent_path() / p).lexically_normal().string();
    }
  };
  resolve(sc.initial.file);
  if (sc.phi_spec.rfind("table:", 0) == 0) {
    std::string file = sc.phi_spec.substr(6);
    resolve(file);
    sc.phi_spec = "table:" + file;
  }
  return sc;
}

StateField build_initial(const Scenario& sc) {
  const Grid1D grid(sc.grid.x_lo, sc.grid.x_hi, sc.grid.n_cells, sc.grid.boundary);
  const InitialProfile& p = sc.initial;
  std::function<double(double)> u0, v0;
  switch (p.kind) {
    case ProfileKind::Constant:
      u0 = [c = p.constant.u](double) { return c; };
      v0 = [c = p.constant.v](double) { return c; };
      break;
    case ProfileKind::SineRadial: {
      auto r = sine_r(p);
      auto th = sine_angle(p);
      u0 = [r, th](double x) { return r(x) * std::cos(th(x)); };
      v0 = [r, th](double x) { return r(x) * std::sin(th(x)); };
      break;
    }
    case ProfileKind::RiemannStep:
      u0 = [p](double x) { return x < p.x_step ? p.left.u : p.right.u; };
      v0 = [p](double x) { return x < p.x_step ? p.left.v : p.right.v; };
      break;
    case ProfileKind::FromFile: {
      const auto rows = read_table(p.file);
      if (static_cast<int>(rows.size()) != grid.n_cells) {
        throw Error(ErrorKind::ValidationError, "initial.file: expected " +
                                                    std::to_string(grid.n_cells) + " rows, found " +
                                                    std::to_string(rows.size()));
      }
      StateField f(grid);
      for (int i = 0; i < grid.n_cells; ++i) {
        if (rows[i].size() < 3) throw Error(ErrorKind::ParseError, "initial.file: need columns x, u, v");
        f.u[i] = rows[i][1];
        f.v[i] = rows[i][2];
      }
      return f;
    }
  }
  if (p.mollify_eps > 0.0) return mollify_initial_data(u0, v0, p.mollify_eps, grid).field;
  return StateField::sample(grid, u0, v0);
}

Trajectory run_solver(const Scenario& sc, const StateField& init) {
  const PhiModel phi = sc.phi();
  if (sc.viscosity > 0.0) {
    return simulate_viscous(init, phi, sc.damping, {sc.solver, sc.viscosity, sc.diffusion_number});
  }
  return simulate(init, phi, sc.damping, sc.solver);
}

bool RunResult::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::filesystem::path output_root(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("KKD_OUTPUT_DIR"); env && *env) return env;
  return fallback;
}

RunResult run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
  const auto wall_start = std::chrono::steady_clock::now();
  sc.validate();
  const PhiModel phi = sc.phi();
  const StateField init = build_initial(sc);
  const Trajectory traj = run_solver(sc, init);
  RunResult res;
  std::filesystem::create_directories(out_dir);

  if (sc.write_snapshots) {
    for (const auto& f : traj) {
      const auto path = out_dir / snapshot_filename(sc.name, f.t);
      write_snapshot(path, f, phi);
      res.files.push_back(path);
    }
  }

  auto detail_num = [](double x) { return format_number(x); };

  if (sc.decay) {
    for (double p : sc.decay->p) {
      DecayOptions opts;
      opts.p = p;
      if (sc.decay->weighted) opts.weight = WeightFunction{};
      const DecayReport rep = decay_harness(traj, phi, sc.damping, opts);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < rep.times.size(); ++i) {
        rows.push_back({rep.times[i], rep.norms[i], rep.bound[i]});
      }
      const auto path = out_dir / (sc.name + "_decay_p" + format_label(p) + ".tsv");
      write_table(path,
                  {"decay series, p = " + format_number(p), "theorem_rate = " + detail_num(rep.theorem_rate) +
                       " (" + rep.rate_basis + ")",
                   "fitted_rate = " + detail_num(rep.fitted_rate), "K_est = " + detail_num(rep.K_est)},
                  {"t", "norm", "bound"}, rows);
      res.files.push_back(path);
      bool ok = rep.pass;
      std::string detail = "fitted_rate=" + detail_num(rep.fitted_rate) +
                           " theorem_rate=" + detail_num(rep.theorem_rate) +
                           " bound_ok=" + (rep.bound_ok ? "1" : "0") + " rate_ok=" + (rep.rate_ok ? "1" : "0");
      if (sc.decay->expected_rate) {
        const double e = *sc.decay->expected_rate;
        const bool match = std::abs(rep.fitted_rate - e) <= sc.decay->rate_tolerance * std::abs(e);
        ok = ok && match;
        detail += " expected=" + detail_num(e) + (match ? " (match)" : " (MISMATCH)");
      }
      res.checks.push_back({"decay_p" + format_label(p), ok, detail});
    }
  }

  if (sc.region) {
    const ContainmentReport rep = trajectory_containment(traj, *sc.region, phi, sc.region_tol);
    res.checks.push_back({"region_containment", rep.max_violation <= sc.region_tol,
                          "max_violation=" + detail_num(rep.max_violation) +
                              " first_violation_t=" + detail_num(rep.first_violation_time)});
  }

  if (sc.riemann_tolerance) {
    const RiemannInvariantReport rep =
        riemann_invariant_diagnostics(traj, phi, sc.damping, *sc.riemann_tolerance);
    res.checks.push_back({"riemann_invariants", rep.pass,
                          "z_rate=" + detail_num(rep.fitted_z_rate) +
                              " max_z_dev=" + detail_num(rep.max_z_deviation) +
                              " max_w_excess=" + detail_num(rep.max_w_excess)});
  }

  if (sc.linf_check) {
    double u0 = 0.0, v0 = 0.0, worst = 0.0;
    for (int i = 0; i < init.size(); ++i) {
      u0 = std::max(u0, std::abs(init.u[i]));
      v0 = std::max(v0, std::abs(init.v[i]));
    }
    for (const auto& f : traj) {
      for (int i = 0; i < f.size(); ++i) {
        worst = std::max({worst, std::abs(f.u[i]) - u0, std::abs(f.v[i]) - v0});
      }
    }
    res.checks.push_back({"linf_bound", worst <= 1e-12 * std::max({u0, v0, 1.0}),
                          "max_excess=" + detail_num(worst)});
  }

  if (sc.oracle) {
    const InitialProfile& p = sc.initial;
    auto r0 = sine_r(p);
    const auto xs = traj.back().grid.centers();
    CharacteristicsOptions opts;
    if (sc.grid.boundary == Boundary::Periodic) opts.scan = {{sc.grid.x_lo, sc.grid.x_hi}};
    const auto exact = radial_characteristics_profile(r0, phi, sc.damping.a, xs, traj.back().t, opts);
    const auto r = traj.back().r();
    double l1 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) l1 += std::abs(r[i] - exact[i]);
    l1 *= traj.back().grid.dx();
    res.checks.push_back({"characteristics_oracle", l1 <= sc.oracle->max_l1, "l1=" + detail_num(l1)});
  }

  if (sc.entropy) {
    const EntropyPair pair = power_entropy_pair(sc.entropy->m, phi);
    const Grid1D& g = traj.front().grid;
    const double T = traj.back().t - traj.front().t;
    const double L = g.x_hi - g.x_lo;
    std::vector<TestFunction> tests;
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        tests.push_back({g.x_lo + L * i / 4.0, traj.front().t + T * j / 4.0, L / 8.0, T / 8.0});
      }
    }
    const auto rep = entropy_residual(traj, pair, sc.damping, tests, sc.entropy->tol_constant);
    res.checks.push_back({"entropy_inequality", rep.pass,
                          "max_R=" + detail_num(rep.max_residual) + " tol=" + detail_num(rep.tol_scheme)});
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  const auto manifest = out_dir / (sc.name + "_manifest.txt");
  std::ofstream man(manifest, std::ios::binary);
  if (!man) throw Error(ErrorKind::IOError, "cannot write manifest");
  man << "# kkd run manifest\n";
  man << "tool_version = " << kToolVersion << '\n';
  man << "source = " << sc.source << '\n';
  for (const auto& [k, v] : sc.raw) man << "input." << k << " = " << v << '\n';
  man << "phi.resolved = " << phi.describe() << '\n';
  man << "phi.condition_c1 = " << (phi.condition_c1().holds ? "holds" : "fails") << '\n';
  for (const auto& c : res.checks) {
    man << "check." << c.name << " = " << (c.pass ? "pass" : "FAIL") << "  " << c.detail << '\n';
  }
  man << "wall_time_s = " << wall << '\n';
  res.files.push_back(manifest);
  return res;
}

}  // namespace kkd
