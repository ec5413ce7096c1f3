#include <cmath>

#include "doctest.h"
#include "movwave/coupled.hpp"
#include "movwave/error.hpp"
#include "movwave/transform.hpp"

using namespace movwave;
using namespace movwave::coupled;

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Constant data 2 - 2x, sqrt(2) with the value at x = 0 carried by a lifting.
characteristics::CharScenario lifted_constant(double horizon) {
  const SpaceTimeField W = SpaceTimeField::parse("Separable(Affine(2, sqrt(2)), Sum(Const(1), Product(Const(-1), Smoothstep(0, 1))))");
  const auto lifted = transform::lift_dirichlet(W, Expr::affine(2.0, -2.0), Expr::constant(kSqrt2), {0.0});
  characteristics::CharScenario sc;
  sc.l0 = 1.0;
  sc.u0 = lifted.u0;
  sc.u1 = lifted.u1;
  sc.f = lifted.f;
  sc.kappa = Expr::constant(1.0);
  sc.horizon = horizon;
  return sc;
}

void check_invariants(const CoupledResult& r) {
  for (std::size_t k = 0; k < r.front.size(); ++k) {
    CHECK(r.front[k].speed >= 0.0);
    CHECK(r.front[k].speed < 1.0);
    if (k) CHECK(r.front[k].position >= r.front[k - 1].position);
  }
}

}  // namespace

TEST_CASE("coupled 1D run follows the exact front speed") {
  CoupledOptions o;
  o.cells = 200;
  o.dt = 2e-3;
  const auto r = evolve_coupled_1d(lifted_constant(1.0), o);
  check_invariants(r);
  for (const auto& f : r.front) CHECK(std::abs(f.speed - kSqrt2 / 2.0) <= 1e-3);
  CHECK(r.griffith.pass);
  CHECK(r.front.back().position == doctest::Approx(1.0 + kSqrt2 / 2.0).epsilon(1e-3));
  double worst = 0.0;
  for (double b : r.balance_residual) worst = std::max(worst, b);
  CHECK(worst <= 1e-2);
  // Debonding energy equals kappa times the debonded length.
  CHECK(r.ledger.debond_dissipation.back() == doctest::Approx(r.ledger.debond_direct.back()).epsilon(1e-3));
}

TEST_CASE("subcritical data keep the front at rest") {
  characteristics::CharScenario sc;
  sc.l0 = 1.0;
  sc.u0 = Expr::sine_mode(0.1, 1);
  sc.u1 = Expr::constant(0.0);
  sc.kappa = Expr::constant(1.0);
  sc.horizon = 0.5;
  CoupledOptions o;
  o.cells = 100;
  const auto r = evolve_coupled_1d(sc, o);
  for (const auto& f : r.front) {
    CHECK(f.position == 1.0);
    CHECK(f.speed == 0.0);
  }
  CHECK(r.griffith.pass);
}

TEST_CASE("incompatible coupled data are rejected") {
  characteristics::CharScenario sc = lifted_constant(0.5);
  sc.u1 = Expr::constant(0.3);
  try {
    (void)evolve_coupled_1d(sc);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CompatibilityViolated);
  }
}

TEST_CASE("radial debonding") {
  RadialScenario rs;
  rs.outer_radius = 2.0;
  rs.rho0 = 0.5;
  rs.u0 = Expr::product(Expr::smoothstep(0.0, 0.1), Expr::affine(1.0, -2.0));
  rs.u1 = Expr::product(Expr::smoothstep(0.0, 0.1), Expr::constant(kSqrt2));
  rs.kappa = Expr::constant(1.0);
  rs.horizon = 0.3;
  CoupledOptions o;
  o.cells = 200;
  const auto r = evolve_coupled_radial(rs, o);
  check_invariants(r);
  CHECK(r.front.back().position > rs.rho0);
  CHECK(r.griffith.pass);

  RadialScenario still = rs;
  still.u0 = Expr::product(Expr::smoothstep(0.0, 0.1), Expr::affine(0.25, -0.5));
  still.u1 = Expr::constant(0.0);
  for (const auto& f : evolve_coupled_radial(still, o).front) CHECK(f.position == rs.rho0);
}
