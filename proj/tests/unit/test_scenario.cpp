#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kkd/error.hpp"
#include "kkd/io.hpp"
#include "kkd/scenario.hpp"

using namespace kkd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char* kSmall = R"(# small run
name = small
phi = power:1
damping.a = 0.3
damping.b = 0.3
grid.n_cells = 64
initial.profile = sine_radial
solver.t_end = 0.5
solver.n_outputs = 6
analysis.decay = true
analysis.linf = true
)";

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "1e-01");
  CHECK(format_number(4.0 / 3.0) == "1.3333333333333333e+00");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_label(2.0) == "2");
  CHECK(format_label(1.5) == "1.5");
  CHECK(snapshot_filename("run", 0.25) == "run_t0.250000.tsv");
}

TEST_CASE("table round trip") {
  const auto dir = fresh_dir("kkd_table_test");
  const auto p = dir / "t.tsv";
  write_table(p, {"hello"}, {"a", "b"}, {{1.0, 2.5}, {3.0, -4.0}});
  const auto rows = read_table(p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][1] == -4.0);
  CHECK(slurp(p).rfind("# hello\n# a\tb\n", 0) == 0);
}

TEST_CASE("snapshot columns") {
  const auto dir = fresh_dir("kkd_snap_test");
  const Grid1D g(0.0, 1.0, 8, Boundary::Periodic);
  const auto f = StateField::sample(g, [](double) { return 3.0; }, [](double x) { return x < 0.5 ? 4.0 : 0.0; });
  write_snapshot(dir / "s.tsv", f, PhiModel::power(1.0));
  const std::string text = slurp(dir / "s.tsv");
  CHECK(text.find("x\tu\tv\tr\tW\tZ") != std::string::npos);
  CHECK(text.find("nan") != std::string::npos);
  const auto rows = read_table(dir / "s.tsv");
  CHECK(rows.size() == 8);
  CHECK(rows[0][3] == 5.0);
  CHECK(rows[0][5] == 0.75);
}

TEST_CASE("parse a scenario") {
  const auto sc = parse_scenario(kSmall);
  CHECK(sc.name == "small");
  CHECK(sc.damping.a == 0.3);
  CHECK(sc.grid.n_cells == 64);
  CHECK(sc.solver.output_times.size() == 6);
  CHECK(sc.solver.output_times.back() == 0.5);
  CHECK(sc.decay.has_value());
  CHECK(sc.linf_check);
  CHECK_NOTHROW(sc.validate());
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_scenario("name = x\nphi = cubic:3\n", "cfg");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("cfg:2:") != std::string::npos);
  }
  try {
    parse_scenario("name = x\n\n  bogus.key = 1\n", "cfg");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("cfg:3:3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("damping.a = fast\n"), Error);
  CHECK_THROWS_AS(parse_scenario("no equals sign\n"), Error);
  CHECK_THROWS_AS(parse_scenario("grid.boundary = reflecting\n"), Error);
}

TEST_CASE("validation names the failing condition") {
  auto sc = parse_scenario("damping.a = 0.1\ndamping.b = 0.5\n");
  try {
    sc.validate();
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(std::string(e.what()).find("C2") != std::string::npos);
  }
  sc = parse_scenario("solver.cfl = 2\n");
  CHECK_THROWS_AS(sc.validate(), Error);
  sc = parse_scenario("grid.n_cells = 4\n");
  CHECK_THROWS_AS(sc.validate(), Error);
}

TEST_CASE("run writes series and manifest, deterministically") {
  const auto sc = parse_scenario(kSmall);
  const auto d1 = fresh_dir("kkd_run_a");
  const auto d2 = fresh_dir("kkd_run_b");
  const auto r1 = run_scenario(sc, d1);
  const auto r2 = run_scenario(sc, d2);
  CHECK(r1.pass());
  CHECK(fs::exists(d1 / "small_decay_p2.tsv"));
  CHECK(fs::exists(d1 / "small_manifest.txt"));
  CHECK(fs::exists(d1 / "small_t0.500000.tsv"));
  REQUIRE(r1.files.size() == r2.files.size());
  for (const auto& f : r1.files) {
    if (f.filename() == "small_manifest.txt") continue;
    CHECK(slurp(f) == slurp(d2 / f.filename()));
  }
  const std::string man = slurp(d1 / "small_manifest.txt");
  CHECK(man.find("tool_version = ") != std::string::npos);
  CHECK(man.find("input.damping.a = 0.3") != std::string::npos);
  CHECK(man.find("wall_time_s") != std::string::npos);
}

TEST_CASE("initial profiles") {
  auto sc = parse_scenario("initial.profile = constant\ninitial.state = 0.3, 0.4\ngrid.n_cells = 16\n");
  auto f = build_initial(sc);
  CHECK(f.u[3] == 0.3);
  CHECK(f.v[3] == 0.4);
  sc = parse_scenario(
      "initial.profile = riemann_step\ninitial.left = 1, 2\ninitial.right = 3, 4\ninitial.x_step = 0.5\n"
      "grid.x_lo = 0\ngrid.x_hi = 1\ngrid.n_cells = 16\ngrid.boundary = outflow\n");
  f = build_initial(sc);
  CHECK(f.u[0] == 1.0);
  CHECK(f.v[15] == 4.0);

  const auto dir = fresh_dir("kkd_profile_file");
  {
    std::ofstream out(dir / "data.txt");
    for (int i = 0; i < 16; ++i) out << (i + 0.5) / 16 << ' ' << 0.1 * i << ' ' << 0.2 << '\n';
  }
  {
    std::ofstream out(dir / "s.cfg");
    out << "initial.profile = file\ninitial.file = data.txt\ngrid.x_lo = 0\ngrid.x_hi = 1\ngrid.n_cells = 16\n";
  }
  f = build_initial(load_scenario(dir / "s.cfg"));
  CHECK(f.u[4] == doctest::Approx(0.4));

  sc = parse_scenario("initial.mollify_eps = 0.3\ngrid.n_cells = 64\n");
  f = build_initial(sc);
  CHECK(std::isfinite(f.u[0]));
}

TEST_CASE("output root honours the environment") {
  ::setenv("KKD_OUTPUT_DIR", "/tmp/kkd_env_root", 1);
  CHECK(output_root("fallback") == fs::path("/tmp/kkd_env_root"));
  ::unsetenv("KKD_OUTPUT_DIR");
  CHECK(output_root("fallback") == fs::path("fallback"));
}
