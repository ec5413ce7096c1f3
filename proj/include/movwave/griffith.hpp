#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "movwave/parallel.hpp"

namespace movwave::griffith {

// G_alpha = 1/2 (1 - alpha^2) p^2.
double release_rate(double p, double alpha);

// Closed form: sqrt(1 - 2 kappa / p^2) when p^2 > 2 kappa, else 0.
double flow_rule_a(double p, double kappa);
// Velocity form: max(((p - u_dot)^2 - 2 kappa) / ((p - u_dot)^2 + 2 kappa), 0).
double flow_rule_b(double p, double u_dot, double kappa);
// Dispatches on the presence of the velocity trace.
double flow_rule(double p, std::optional<double> u_dot, double kappa);
// Solution of omega = flow_rule_b(p, -omega p, kappa) by bisection.
double flow_rule_b_fixed_point(double p, double kappa);

// Largest alpha on the grid {i / M} whose complementarity alpha (kappa - G_alpha)
// vanishes up to the grid slack.
double mdp_oracle(double p, double kappa, int grid_size);

enum class Compatibility { SubcriticalRest, ActivatedStart, Incompatible };
std::string compatibility_name(Compatibility c);

// du0 is the outward normal derivative of u0 at the front, u1 the velocity there.
Compatibility compatibility_check(double du0, double u1, double kappa, double tol = 1e-9);

struct GriffithSample {
  double t = 0.0;
  double x = 0.0;
  double omega = 0.0;
  double p = 0.0;
  double G = 0.0;
  double kappa = 0.0;
  bool activated = false;
  double complementarity = 0.0;  // omega (G - kappa)
  bool pass = false;
};

struct GriffithReport {
  std::vector<GriffithSample> samples;
  double tol = 1e-3;
  double max_excess = 0.0;           // max(G - kappa)
  double max_complementarity = 0.0;  // max |omega (G - kappa)|
  double max_speed = 0.0;
  bool pass = true;
};

struct FrontObservation {
  double t = 0.0;
  double x = 0.0;
  double omega = 0.0;
  double p = 0.0;
  double kappa = 0.0;
};

// Speed in [0, 1), G <= kappa + tol, |omega (G - kappa)| <= tol.
GriffithReport griffith_check(const std::vector<FrontObservation>& front, double tol = 1e-3);

struct EquivalenceReport {
  int pairs = 0;
  int grid_size = 0;
  double max_a_vs_b = 0.0;
  double max_a_vs_mdp = 0.0;
  double max_b_vs_mdp = 0.0;
  double max_activated_identity = 0.0;  // |G_omega - kappa| on activated pairs
  double max_discrepancy() const;
};

// p uniform in [0, 5], kappa uniform in [0.1, 5].
EquivalenceReport equivalence_sweep(int pairs, int grid_size, std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace movwave::griffith
