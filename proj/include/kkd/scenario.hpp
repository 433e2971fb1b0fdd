#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kkd/analysis.hpp"
#include "kkd/region.hpp"
#include "kkd/solver.hpp"

namespace kkd {

inline constexpr const char* kToolVersion = "0.3.0";

enum class ProfileKind { Constant, SineRadial, RiemannStep, FromFile };

struct InitialProfile {
  ProfileKind kind = ProfileKind::SineRadial;
  // Constant
  State constant{1.0, 1.0};
  // SineRadial: r = mean + amplitude sin(k x), angle = angle0 + angle_amplitude sin(k x),
  // u = r cos(angle), v = r sin(angle)
  double mean = 0.1;
  double amplitude = 0.05;
  double wavenumber = 1.0;
  double angle = 0.7853981633974483;
  double angle_amplitude = 0.0;
  // RiemannStep
  State left{1.0, 1.0};
  State right{0.5, 0.5};
  double x_step = 0.0;
  // FromFile: columns x, u, v (one row per cell)
  std::string file;
  // Optional mollification width; 0 disables it.
  double mollify_eps = 0.0;
};

struct DecayCheck {
  std::vector<double> p{2.0};
  bool weighted = false;
  std::optional<double> expected_rate;
  double rate_tolerance = 0.02;  // relative
};

struct EntropyCheck {
  double m = 2.0;
  double tol_constant = 1.0;
};

struct OracleCheck {
  double max_l1 = 1e-3;
};

struct Scenario {
  std::string name = "run";
  std::string source;  // file or "<string>"
  std::string phi_spec = "power:1";
  double r_max = 1e3;
  Damping damping{};
  Grid1D grid{0.0, 6.283185307179586, 256, Boundary::Periodic};
  InitialProfile initial{};
  SolverConfig solver{};
  double viscosity = 0.0;
  double diffusion_number = 0.4;
  bool write_snapshots = true;
  std::uint64_t seed = 0;

  std::optional<DecayCheck> decay;
  std::optional<RegionSigma> region;
  double region_tol = 1e-8;
  std::optional<double> riemann_tolerance;
  bool linf_check = false;
  std::optional<EntropyCheck> entropy;
  std::optional<OracleCheck> oracle;

  // key -> value as read, for the manifest.
  std::map<std::string, std::string> raw;

  PhiModel phi() const;
  // Cross-field validation; throws ValidationError naming the field.
  void validate() const;
};

// Flat "dotted.key = value" format; '#' starts a comment. Throws ParseError
// with "origin:line:column".
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

StateField build_initial(const Scenario& sc);
Trajectory run_solver(const Scenario& sc, const StateField& init);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  std::vector<CheckResult> checks;
  std::vector<std::filesystem::path> files;
  bool pass() const;
};

// Simulates, runs every enabled diagnostic and writes snapshots, series
// and a manifest under out_dir.
RunResult run_scenario(const Scenario& sc, const std::filesystem::path& out_dir);

// Output root: KKD_OUTPUT_DIR when set, else fallback.
std::filesystem::path output_root(const std::filesystem::path& fallback);

}  // namespace kkd
