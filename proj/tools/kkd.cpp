// kkd: command-line driver for the damped symmetric Keyfitz-Kranzer laboratory.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kkd/analysis.hpp"
#include "kkd/entropy.hpp"
#include "kkd/error.hpp"
#include "kkd/io.hpp"
#include "kkd/model.hpp"
#include "kkd/region.hpp"
#include "kkd/scenario.hpp"
#include "kkd/viscous.hpp"

namespace fs = std::filesystem;
using namespace kkd;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

fs::path resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  return output_root("kkd_out");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void print_checks(std::ostream& os, const std::string& name, const RunResult& res) {
  for (const auto& c : res.checks) {
    os << name << '\t' << c.name << '\t' << (c.pass ? "PASS" : "FAIL") << '\t' << c.detail << '\n';
  }
  os << name << "\tverdict\t" << (res.pass() ? "PASS" : "FAIL") << '\n';
}

int cmd_run(const std::vector<std::string>& files, int jobs, const std::string& out_flag) {
  const fs::path root = resolve_out(out_flag);
  std::vector<Scenario> scenarios;
  for (const auto& f : files) scenarios.push_back(load_scenario(f));
  for (const auto& sc : scenarios) sc.validate();

  struct Outcome {
    std::string text;
    bool pass;
    bool error;
  };
  auto work = [&root](const Scenario& sc) -> Outcome {
    std::ostringstream os;
    try {
      const RunResult res = run_scenario(sc, root / sc.name);
      print_checks(os, sc.name, res);
      return {os.str(), res.pass(), false};
    } catch (const std::exception& e) {
      os << sc.name << "\terror\t" << e.what() << " [scenario " << sc.source << "]\n";
      return {os.str(), false, true};
    }
  };

  std::vector<Outcome> outcomes(scenarios.size());
  if (jobs <= 1 || scenarios.size() <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) outcomes[i] = work(scenarios[i]);
  } else {
    for (std::size_t start = 0; start < scenarios.size(); start += jobs) {
      std::vector<std::future<Outcome>> batch;
      const std::size_t end = std::min(scenarios.size(), start + static_cast<std::size_t>(jobs));
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, work, std::cref(scenarios[i])));
      }
      for (std::size_t i = start; i < end; ++i) outcomes[i] = batch[i - start].get();
    }
  }
  bool all_pass = true, any_error = false;
  for (const auto& o : outcomes) {
    std::cout << o.text;
    all_pass = all_pass && o.pass;
    any_error = any_error || o.error;
  }
  if (any_error) return kExitError;
  return all_pass ? 0 : kExitFail;
}

int cmd_simulate(const std::string& file, const std::string& out_flag) {
  Scenario sc = load_scenario(file);
  sc.decay.reset();
  sc.region.reset();
  sc.riemann_tolerance.reset();
  sc.linf_check = false;
  sc.entropy.reset();
  sc.oracle.reset();
  sc.write_snapshots = true;
  const RunResult res = run_scenario(sc, resolve_out(out_flag) / sc.name);
  for (const auto& f : res.files) std::cout << f.string() << '\n';
  return 0;
}

int cmd_decay(const std::string& file, double p, bool weighted, const std::string& out_flag) {
  const Scenario sc = load_scenario(file);
  sc.validate();
  const PhiModel phi = sc.phi();
  const Trajectory traj = run_solver(sc, build_initial(sc));
  DecayOptions opts;
  opts.p = p;
  if (weighted) opts.weight = WeightFunction{};
  const DecayReport rep = decay_harness(traj, phi, sc.damping, opts);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.times.size(); ++i) rows.push_back({rep.times[i], rep.norms[i], rep.bound[i]});
  const fs::path path = resolve_out(out_flag) / sc.name / (sc.name + "_decay_p" + format_label(p) + ".tsv");
  const std::vector<std::string> comments = {
      "decay series for " + sc.name + ", p = " + format_number(p) + (weighted ? ", weighted" : ""),
      "theorem_rate = " + format_number(rep.theorem_rate) + " (" + rep.rate_basis + ")"};
  write_table(path, comments, {"t", "norm", "bound"}, rows);
  std::cout << format_table(comments, {"t", "norm", "bound"}, rows);
  std::cout << "verdict\t" << (rep.pass ? "PASS" : "FAIL") << "\tfitted_rate=" << format_number(rep.fitted_rate)
            << "\ttheorem_rate=" << format_number(rep.theorem_rate) << "\tK_est=" << format_number(rep.K_est)
            << "\trate_window=[" << format_number(rep.rate_lo) << "," << format_number(rep.rate_hi) << "]\n";
  return rep.pass ? 0 : kExitFail;
}

int cmd_entropy_pair(double m, const std::string& phi_spec, double r_max, int n, double tol,
                     const std::string& out_file) {
  const PhiModel phi = parse_phi_spec(phi_spec, r_max);
  const EntropyPair pair = power_entropy_pair(m, phi, tol);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    const double r = r_max * i / (n - 1);
    rows.push_back({r, pair.q(r)});
  }
  const std::vector<std::string> comments = {"entropy pair eta = r^m, m = " + format_number(m),
                                             "phi = " + phi.describe()};
  const std::string table = format_table(comments, {"r", "q"}, rows);
  if (out_file.empty()) {
    std::cout << table;
  } else {
    write_table(out_file, comments, {"r", "q"}, rows);
    std::cout << out_file << '\n';
  }
  return 0;
}

int cmd_region_check(const std::string& phi_spec, double r_max, double a, double b,
                     const RegionSigma& sigma, int n, const std::vector<std::string>& skip) {
  const PhiModel phi = parse_phi_spec(phi_spec, r_max);
  const BoundaryFlowReport rep = boundary_flow_check(sigma, phi, {a, b}, n);
  bool ok = true;
  std::printf("%-6s %-8s %-24s %-24s %-8s %s\n", "piece", "enabled", "min(grad.g)", "max(grad.g)",
              "source", "reversed-source");
  for (const auto& piece : rep.pieces) {
    const std::string name = to_string(piece.piece);
    const bool enabled = std::find(skip.begin(), skip.end(), name) == skip.end();
    std::string verdict = piece.pass ? "inward" : "OUTWARD";
    if (enabled && !piece.pass) ok = false;
    std::printf("%-6s %-8s %-24s %-24s %-8s %s\n", name.c_str(), enabled ? "yes" : "no",
                format_number(piece.min_dot).c_str(), format_number(piece.max_dot).c_str(),
                verdict.c_str(), piece.pass_reversed_source ? "inward" : "OUTWARD");
  }
  std::printf("r_boundary %s  phi_increasing %s\n", format_number(rep.r_boundary).c_str(),
              rep.phi_increasing ? "yes" : "no");
  std::printf("verdict %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : kExitFail;
}

int cmd_convergence(const std::string& file, const std::vector<double>& eps_list,
                    const std::string& out_flag) {
  const Scenario sc = load_scenario(file);
  sc.validate();
  const PhiModel phi = sc.phi();
  const StateField init = build_initial(sc);
  const auto rows = vanishing_viscosity_sweep(init, phi, sc.damping, sc.solver, eps_list, sc.diffusion_number);
  std::vector<std::vector<double>> table;
  for (const auto& r : rows) table.push_back({r.eps, r.distance});
  const std::vector<std::string> comments = {"vanishing viscosity sweep for " + sc.name,
                                             "distance = L1 to the hyperbolic solution at t_end"};
  const fs::path path = resolve_out(out_flag) / sc.name / (sc.name + "_convergence.tsv");
  write_table(path, comments, {"eps", "distance"}, table);
  std::cout << format_table(comments, {"eps", "distance"}, table);
  return 0;
}

int cmd_eigen(const std::string& phi_spec, double r_max, const std::string& state_str) {
  const auto xs = parse_list(state_str);
  if (xs.size() != 2) throw CLI::ValidationError("--state", "expected u,v");
  const PhiModel phi = parse_phi_spec(phi_spec, r_max);
  const State s{xs[0], xs[1]};
  const auto ev = eigenvalues(s, phi);
  std::cout << "phi\t" << phi.describe() << '\n';
  std::cout << "state\t" << format_number(s.u) << '\t' << format_number(s.v) << '\n';
  std::cout << "lambda1\t" << format_number(ev.lambda1) << '\n';
  std::cout << "lambda2\t" << format_number(ev.lambda2) << '\n';
  if (s.r() > 0.0) {
    const auto vecs = eigenvectors(s);
    std::cout << "r1\t" << format_number(vecs.r1[0]) << '\t' << format_number(vecs.r1[1]) << '\n';
    std::cout << "r2\t" << format_number(vecs.r2[0]) << '\t' << format_number(vecs.r2[1]) << '\n';
    if (vecs.axis_state) std::cout << "warning\taxis state: limiting eigenvector directions\n";
  }
  if (s.u != 0.0 && s.v != 0.0) {
    for (int i : {1, 2}) {
      const auto c = classify_field(s, phi, i);
      std::cout << "field" << i << "\t" << to_string(c.kind) << "\tgn=" << format_number(c.gn_value) << '\n';
    }
    const auto ri = riemann_invariants(s, phi);
    std::cout << "W\t" << format_number(ri.W) << "\nZ\t" << format_number(ri.Z) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kkd: damped symmetric Keyfitz-Kranzer laboratory"};
  app.require_subcommand(1);
  std::string out_flag;
  app.add_option("--out", out_flag, "Output root (default: $KKD_OUTPUT_DIR or ./kkd_out)");
  app.fallthrough();

  std::vector<std::string> run_files;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run scenario files with all enabled checks");
  run->add_option("scenarios", run_files, "Scenario files")->required()->check(CLI::ExistingFile);
  run->add_option("--jobs,-j", jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);

  std::string sim_file;
  auto* sim = app.add_subcommand("simulate", "Simulate a scenario and write snapshots only");
  sim->add_option("scenario", sim_file)->required()->check(CLI::ExistingFile);

  std::string decay_file;
  double decay_p = 2.0;
  bool decay_weighted = false;
  auto* decay = app.add_subcommand("decay", "Measure the L^p decay of r for a scenario");
  decay->add_option("scenario", decay_file)->required()->check(CLI::ExistingFile);
  decay->add_option("--p", decay_p, "Norm exponent (>= 1)");
  decay->add_flag("--weighted", decay_weighted, "Use the exp(-sqrt(1+x^2)) weight");

  double ep_m = 2.0, ep_rmax = 1.0, ep_tol = 1e-10;
  int ep_n = 101;
  std::string ep_phi = "power:1", ep_out;
  auto* ep = app.add_subcommand("entropy-pair", "Tabulate q(r) for eta = r^m");
  ep->add_option("--m", ep_m, "Entropy exponent m >= 1");
  ep->add_option("--phi", ep_phi, "phi spec: power:G | shifted:C,G | const:C | table:PATH");
  ep->add_option("--r-max", ep_rmax, "Upper end of the table");
  ep->add_option("--n", ep_n, "Rows")->check(CLI::Range(2, 10000000));
  ep->add_option("--tol", ep_tol, "Quadrature tolerance");
  ep->add_option("--output,-o", ep_out, "Write the table to this file");

  std::string rc_phi = "power:1";
  double rc_rmax = 10.0, rc_a = 0.6, rc_b = 0.2;
  RegionSigma rc_sigma{1.0, 0.5, 2.0};
  int rc_n = 64;
  std::vector<std::string> rc_skip;
  auto* rc = app.add_subcommand("region-check", "Boundary flow directions on the region Sigma");
  rc->add_option("--phi", rc_phi, "phi spec");
  rc->add_option("--r-max", rc_rmax, "Validity range of phi");
  rc->add_option("--a", rc_a, "Damping rate on u");
  rc->add_option("--b", rc_b, "Damping rate on v");
  rc->add_option("--C0", rc_sigma.C0, "Bound on W = phi(r)");
  rc->add_option("--C1", rc_sigma.C1, "Lower bound on Z = u/v");
  rc->add_option("--C2", rc_sigma.C2, "Upper bound on Z = u/v");
  rc->add_option("--n", rc_n, "Samples per boundary piece")->check(CLI::PositiveNumber);
  rc->add_option("--skip", rc_skip, "Boundary pieces to disable (W=C0, Z=C1, Z=C2)");

  std::string cv_file, cv_eps = "0.1,0.05,0.025,0.0125";
  auto* cv = app.add_subcommand("convergence", "Vanishing-viscosity sweep for a scenario");
  cv->add_option("scenario", cv_file)->required()->check(CLI::ExistingFile);
  cv->add_option("--eps", cv_eps, "Strictly decreasing viscosities, comma separated");

  std::string eg_phi = "power:1", eg_state;
  double eg_rmax = 1e3;
  auto* eg = app.add_subcommand("eigen", "Eigenstructure at a state");
  eg->add_option("--phi", eg_phi, "phi spec");
  eg->add_option("--r-max", eg_rmax, "Validity range of phi");
  eg->add_option("--state", eg_state, "State u,v")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_files, jobs, out_flag);
    if (*sim) return cmd_simulate(sim_file, out_flag);
    if (*decay) return cmd_decay(decay_file, decay_p, decay_weighted, out_flag);
    if (*ep) return cmd_entropy_pair(ep_m, ep_phi, ep_rmax, ep_n, ep_tol, ep_out);
    if (*rc) return cmd_region_check(rc_phi, rc_rmax, rc_a, rc_b, rc_sigma, rc_n, rc_skip);
    if (*cv) return cmd_convergence(cv_file, parse_list(cv_eps), out_flag);
    if (*eg) return cmd_eigen(eg_phi, eg_rmax, eg_state);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number in argument list\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
