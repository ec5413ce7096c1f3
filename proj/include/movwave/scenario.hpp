#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "movwave/characteristics.hpp"
#include "movwave/coupled.hpp"
#include "movwave/expr.hpp"
#include "movwave/geometry.hpp"

namespace movwave {

enum class ProblemKind { Wave, Coupled1D, CoupledRadial };
enum class WaveSolver { Galerkin, FiniteDifference, Cylinder };

struct Numerics {
  int modes = 32;
  int grid = 400;
  double dt = 1e-3;
  int partitions = 32;
  int quadrature = 8;  // Gauss points per panel for ledger quadrature
  WaveSolver solver = WaveSolver::Galerkin;
  bool velocity_form = false;
  double griffith_tol = 1e-3;
};

struct Outputs {
  std::string directory = "out";
  bool ledger = true;
  bool trajectory = true;
  bool front = true;
  int trajectory_times = 51;
  int trajectory_points = 101;
};

// Parsed scenario file. Sections: top level (name, kind), [motion], [data],
// [coupled], [numerics], [output].
struct Scenario {
  std::string name = "scenario";
  ProblemKind kind = ProblemKind::Wave;

  // [motion]
  geometry::MotionSpec motion;
  std::string motion_text;  // canonical echo of the motion section

  // [data]
  Expr u0 = Expr::constant(0.0);
  Expr u1 = Expr::constant(0.0);
  SpaceTimeField f;
  std::optional<SpaceTimeField> W;  // Dirichlet data at the fixed end, lifted before solving
  Expr kappa = Expr::constant(1.0);

  // [coupled]
  double front0 = 1.0;  // l0 or rho0
  double outer_radius = 2.0;
  double horizon = 1.0;

  Numerics numerics;
  Outputs outputs;

  // Compatibility verdict at the initial front (coupled kinds).
  std::optional<griffith::Compatibility> compatibility;

  // Key/value pairs in canonical form, sorted by section then key.
  std::vector<std::pair<std::string, std::string>> echo() const;
  // Scenario file reproducing echo().
  std::string to_text() const;

  characteristics::CharScenario char_scenario() const;
  coupled::RadialScenario radial_scenario() const;
  coupled::CoupledOptions coupled_options() const;
};

std::string problem_kind_name(ProblemKind k);
std::string wave_solver_name(WaveSolver s);

Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<string>");
Scenario parse_scenario(const std::filesystem::path& path);

}  // namespace movwave
