#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "movwave/expr.hpp"
#include "movwave/geometry.hpp"
#include "movwave/parallel.hpp"
#include "movwave/trajectory.hpp"
#include "movwave/transform.hpp"

namespace movwave::energy {

// Planar: 1D slices with unit weight. Radial: r = R - |x| with weight 2 pi (R - r).
enum class Geometry { Planar, Radial };

// Physical solution on Omega_t sampled at increasing abscissae.
struct Slice {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> u_t;
  std::vector<double> u_x;  // optional nodal gradient
};

struct TracePoint {
  double x = 0.0;
  double omega = 0.0;
  double p = 0.0;       // outward normal derivative
  double weight = 1.0;  // surface measure of the point
};

struct BoundaryTrace {
  double t = 0.0;
  std::vector<TracePoint> points;
};

struct LedgerInput {
  std::vector<Slice> slices;
  std::vector<BoundaryTrace> traces;  // same time grid as slices
  SpaceTimeField f;
  Geometry geometry = Geometry::Planar;
  double outer_radius = 0.0;   // R for Radial
  std::optional<Expr> kappa;   // toughness; absent means no debonding energy
  std::vector<double> front;   // front parameter per slice, for the direct debond integral
};

struct EnergyLedger {
  std::vector<double> t;
  std::vector<double> kinetic;
  std::vector<double> potential;
  std::vector<double> work;
  std::vector<double> boundary_dissipation;
  std::vector<double> debond_dissipation;  // int_0^t int omega kappa
  std::vector<double> debond_direct;       // int over Omega_t \ Omega_0 of kappa
  std::vector<double> residual_moving;
  std::vector<double> residual_fixed;
  std::vector<std::optional<double>> G_total;
  double initial_energy() const { return kinetic.empty() ? 0.0 : kinetic.front() + potential.front(); }
};

EnergyLedger ledger(const LedgerInput& input, Exec exec = Exec::Parallel);

// |kinetic + potential + boundary_dissipation - initial - work| per stored time.
std::vector<double> balance_residual_moving(const EnergyLedger& l);

// Debonding balance |E(t) + int kappa - E(0)| with E = kinetic + potential - work.
std::vector<double> coupled_balance_residual(const EnergyLedger& l);

// Reference-frame balance with the remainder of the transformed operator.
std::vector<double> balance_residual_fixed(const Trajectory& v, const transform::CoefficientField1D& coeffs,
                                           Exec exec = Exec::Parallel);

// 1/2 (1 - alpha^2) p^2; with u_dot consistent (u_dot = -alpha p) the
// equivalent form 1/2 (1 - alpha)/(1 + alpha) (p - u_dot)^2 is checked to 1e-10.
double release_rate_density(double p, double alpha, std::optional<double> u_dot = std::nullopt);

// Ratio of int omega/2 (1 - omega^2) p^2 to int omega; empty when int omega <= 0.
std::optional<double> total_release_rate(const BoundaryTrace& trace);

// Slices and boundary traces of a 1D solution on a family.
Slice slice_1d(const geometry::MotionFamily& fam, const Trajectory& traj, std::size_t k);
BoundaryTrace trace_1d(const geometry::MotionFamily& fam, const Trajectory& traj, std::size_t k);
LedgerInput ledger_input_1d(const geometry::MotionFamily& fam, const Trajectory& traj, const SpaceTimeField& f,
                            std::optional<Expr> kappa = std::nullopt, std::size_t stride = 1);

// |Omega_0| + int_0^t int omega, by Gauss-Legendre in time and boundary quadrature.
double flux_measure(const geometry::MotionFamily& fam, double t, int time_nodes = 16, int boundary_samples = 256);

}  // namespace movwave::energy
