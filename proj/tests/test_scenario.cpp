#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "movwave/error.hpp"
#include "movwave/runner.hpp"
#include "movwave/scenario.hpp"
#include "movwave/verify.hpp"

using namespace movwave;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(name = minimal
[motion]
type = identity
[data]
u0 = SineMode(1, 1)
)";

const char* kCoupled = R"(# constant-data debonding with a lifted left end
name = constant
kind = coupled-1d
[data]
u0 = Affine(2, -2)
u1 = Const(sqrt(2))
W = Separable(Affine(2, sqrt(2)), Sum(Const(1), Product(Const(-1), Smoothstep(0, 1))))
kappa = Const(1)
[coupled]
l0 = 1
horizon = 0.5
[numerics]
grid = 100
dt = 2e-3
[output]
trajectory = false
)";

const char* kScaling = R"(name = scaling
[motion]
type = scaling
scale = Affine(1, 0.5)
[data]
u0 = SineMode(1, 1)
u1 = Product(Affine(0, -0.5), Derivative(SineMode(1, 1), 1))
[numerics]
solver = fd
grid = 100
[output]
trajectory_times = 5
trajectory_points = 11
)";

Errc code_of(const std::string& text, std::string* message = nullptr) {
  try {
    (void)parse_scenario_text(text, "t.scn");
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("parsed without error");
  return Errc::InvalidArgument;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "movwave-tests" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal wave scenario takes documented defaults") {
  const Scenario sc = parse_scenario_text(kMinimal);
  CHECK(sc.kind == ProblemKind::Wave);
  CHECK(sc.numerics.modes == 32);
  CHECK(sc.numerics.dt == 1e-3);
  CHECK(sc.numerics.solver == WaveSolver::Galerkin);
  CHECK(sc.motion.kind == geometry::MotionKind::Identity);
  CHECK(sc.u0(0.5) == doctest::Approx(1.0));
  CHECK_FALSE(sc.compatibility.has_value());
}

TEST_CASE("strict parsing names the offending line") {
  std::string msg;
  CHECK(code_of(std::string(kMinimal) + "touhgness = 3\n", &msg) == Errc::UnknownKey);
  CHECK(msg.find("t.scn:6:") != std::string::npos);
  CHECK(code_of("[motion]\ntype = identity\n") == Errc::MissingRequired);
  CHECK(code_of(std::string(kMinimal) + "[numerics]\nmodes = many\n", &msg) == Errc::TypeMismatch);
  CHECK(msg.find("t.scn:7:") != std::string::npos);
  CHECK(code_of(std::string(kMinimal) + "[numerics]\ndt = -1\n") == Errc::TypeMismatch);
  CHECK(code_of(std::string(kMinimal) + "[bogus]\n") == Errc::UnknownKey);
  CHECK(code_of(std::string(kMinimal) + "[motion]\nscale = Const(1)\n") == Errc::UnknownKey);
  CHECK(code_of("kind = coupled-1d\n[data]\nu0 = Affine(1, -1)\nu1 = Const(0)\nkappa = Const(1)\n[coupled]\nl0 = 1\n") ==
        Errc::MissingRequired);
}

TEST_CASE("coupled constant data parse as an activated start") {
  const Scenario sc = parse_scenario_text(kCoupled);
  CHECK(sc.kind == ProblemKind::Coupled1D);
  REQUIRE(sc.compatibility.has_value());
  CHECK(*sc.compatibility == griffith::Compatibility::ActivatedStart);
  const auto cs = sc.char_scenario();
  CHECK(std::abs(cs.u0(0.0)) <= 1e-14);  // lifted unknown vanishes at the clamped end
}

TEST_CASE("incompatible coupled data fail at parse time") {
  std::string text = kCoupled;
  text.replace(text.find("Const(sqrt(2))"), 14, "Const(1)");
  const Scenario sc = parse_scenario_text(text);
  CHECK(*sc.compatibility == griffith::Compatibility::Incompatible);
}

TEST_CASE("canonical text round-trips") {
  for (const char* text : {kMinimal, kCoupled, kScaling}) {
    const Scenario a = parse_scenario_text(text);
    const Scenario b = parse_scenario_text(a.to_text());
    CHECK(a.echo() == b.echo());
  }
}

TEST_CASE("identity run writes the fixed-domain ledger header") {
  const auto dir = scratch("identity");
  std::string text = std::string(kMinimal) + "[numerics]\nmodes = 8\n[output]\ntrajectory = false\n";
  const auto art = runner::run(parse_scenario_text(text), dir);
  const std::string csv = slurp(dir / "ledger.csv");
  CHECK(csv.substr(0, csv.find('\n')) == "t,kinetic,potential,work,residual_fixed");
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "trajectory.csv"));
}

TEST_CASE("moving run adds boundary columns and is deterministic") {
  const auto a = scratch("moving-a"), b = scratch("moving-b");
  const Scenario sc = parse_scenario_text(kScaling);
  runner::run(sc, a);
  runner::run(sc, b);
  const std::string csv = slurp(a / "ledger.csv");
  CHECK(csv.substr(0, csv.find('\n')) == "t,kinetic,potential,work,residual_fixed,boundary_dissipation,residual_moving");
  for (const char* f : {"ledger.csv", "trajectory.csv", "manifest.json"}) CHECK(slurp(a / f) == slurp(b / f));
  // 5 times x 11 points plus the header.
  const std::string traj = slurp(a / "trajectory.csv");
  CHECK(std::count(traj.begin(), traj.end(), '\n') == 56);
}

TEST_CASE("coupled run writes the front history") {
  const auto dir = scratch("coupled");
  runner::run(parse_scenario_text(kCoupled), dir);
  std::ifstream in(dir / "front.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,position,speed,p,u_dot,kappa,G,complementarity");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
    const double speed = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
    CHECK(std::abs(speed - std::sqrt(0.5)) <= 2e-3);
    ++rows;
  }
  CHECK(rows == 251);
}

TEST_CASE("sweep runs every scenario into its own directory") {
  const auto src = scratch("sweep-src"), out = scratch("sweep-out");
  fs::create_directories(src);
  std::ofstream(src / "a.scn") << kMinimal << "[numerics]\nmodes = 4\n";
  std::ofstream(src / "b.scn") << "name = broken\nnonsense = 1\n";
  const auto entries = runner::sweep(src, out);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].status == 0);
  CHECK(fs::exists(out / "a" / "manifest.json"));
  CHECK(entries[1].status == 2);
}

TEST_CASE("unknown verification suite") {
  try {
    (void)verify::run_suite("no-such-suite");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownSuite);
  }
  CHECK(verify::suite_names().size() == 6);
}

TEST_CASE("griffith suite reports a passing equivalence sweep") {
  const auto r = verify::run_suite("griffith");
  REQUIRE(r.size() == 1);
  CHECK(r[0].pass());
  CHECK(verify::format_line(r[0]).rfind("C8 PASS", 0) == 0);
}
