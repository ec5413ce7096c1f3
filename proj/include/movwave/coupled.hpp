#pragma once

#include <vector>

#include "movwave/characteristics.hpp"
#include "movwave/energy.hpp"
#include "movwave/griffith.hpp"
#include "movwave/parallel.hpp"
#include "movwave/trajectory.hpp"

namespace movwave::coupled {

struct CoupledOptions {
  int cells = 400;
  double dt = 1e-3;
  bool velocity_form = false;  // flow rule from (p, u_dot) instead of p alone
  double griffith_tol = 1e-3;
  std::size_t store_stride = 10;  // stored trajectory snapshots
  Exec exec = Exec::Parallel;
};

struct FrontRecord {
  double t = 0.0;
  double position = 0.0;  // l or rho
  double speed = 0.0;     // flow-rule output used for the step
  double p = 0.0;         // outward normal derivative at the front
  double u_dot = 0.0;     // velocity trace at the front
  double kappa = 0.0;
};

struct CoupledResult {
  std::vector<FrontRecord> front;
  Trajectory solution;  // physical frame, grid on [0, position]
  energy::EnergyLedger ledger;
  std::vector<double> balance_residual;  // |E(t) + int kappa - E(0)|
  griffith::GriffithReport griffith;
  double max_second_difference = 0.0;  // max |front''| by second differences
};

// Staggered loop: trace, flow rule, forward-Euler front advance, one RK4 step
// of the transformed problem on the per-step scaling family.
CoupledResult evolve_coupled_1d(const characteristics::CharScenario& sc, const CoupledOptions& options = {});

// Annulus {R - rho(t) < |x| < R} in the coordinate r = R - |x|; the outer
// circle r = 0 is clamped and the inner circle r = rho(t) debonds.
struct RadialScenario {
  double outer_radius = 2.0;
  double rho0 = 0.5;
  Expr u0 = Expr::constant(0.0);
  Expr u1 = Expr::constant(0.0);
  Expr kappa = Expr::constant(1.0);
  double horizon = 0.5;
};

CoupledResult evolve_coupled_radial(const RadialScenario& sc, const CoupledOptions& options = {});

}  // namespace movwave::coupled
