#pragma once

#include <functional>
#include <span>
#include <vector>

#include "movwave/expr.hpp"
#include "movwave/geometry.hpp"
#include "movwave/griffith.hpp"
#include "movwave/trajectory.hpp"

namespace movwave::characteristics {

// One-dimensional debonding data: film on [0, l0], glued part [l0, inf).
struct CharScenario {
  double l0 = 1.0;
  Expr u0 = Expr::constant(0.0);
  Expr u1 = Expr::constant(0.0);
  SpaceTimeField f;
  Expr kappa = Expr::constant(1.0);
  double horizon = 1.0;
};

// Verdict of the front conditions at x = l0; Incompatible also when u0(l0) != 0.
griffith::Compatibility scenario_compatibility(const CharScenario& sc, double tol = 1e-9);

// d'Alembert solution on [0, L] with homogeneous Dirichlet ends via odd
// 2L-periodic extension; integrals by adaptive Simpson (tol 1e-9).
double dalembert_fixed(double L, const Expr& u0, const Expr& u1, const SpaceTimeField& f, double t, double x);

struct FrontHistory {
  std::vector<double> times;
  std::vector<double> length;  // l(t)
  std::vector<double> speed;   // l'(t)
  double t_star = 0.0;         // min(T, first zero of l(t) - t)
  bool reached_characteristic_limit = false;
};

// RK4 for the exact front ODE from l(0) = l0 up to T*. With `frozen` the flow
// rule is disabled and the front stays at l0.
FrontHistory front_ode_exact(const CharScenario& sc, double dt = 1e-3, bool frozen = false);

// Characteristic invariant F(t, l) = u0'(l - t) - u1(l - t) - int_0^t f(s, s - t + l) ds.
double characteristic_invariant(const CharScenario& sc, double t, double l);

struct FrontTrace {
  double normal_derivative = 0.0;  // du/dnu at the boundary
  double velocity = 0.0;           // u_t at the boundary
};

// Samples ordered from the boundary inward at spacing h: u[0] on the boundary,
// u[i] at distance i h. At least four samples are needed.
FrontTrace front_trace(std::span<const double> u, std::span<const double> u_t, double h);

// Trace at the upper endpoint Phi(t, hi) of a 1D family.
FrontTrace front_trace(const Trajectory& traj, const geometry::MotionFamily& fam, double t, double h = 0.0);

}  // namespace movwave::characteristics
