// Parallel kernels must reproduce their serial references bit for bit.
#include <cmath>

#include "doctest.h"
#include "movwave/error.hpp"
#include "movwave/energy.hpp"
#include "movwave/griffith.hpp"
#include "movwave/hyperbolic.hpp"

using namespace movwave;

namespace {

const auto kSine = [](double y) { return std::sin(M_PI * y); };

geometry::MotionFamily scaling_half() { return geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0); }

}  // namespace

TEST_CASE("regularity validation") {
  const auto fam = geometry::sublevel_family(geometry::LevelFunction::norm(2), 1.0, Expr::affine(0.2, 0.1), 1.0);
  const auto s = geometry::validate(fam, {}, Exec::Serial), p = geometry::validate(fam, {}, Exec::Parallel);
  CHECK(s.identity_residual == p.identity_residual);
  CHECK(s.max_speed == p.max_speed);
  CHECK(s.min_det == p.min_det);
}

TEST_CASE("Galerkin assembly") {
  const transform::CoefficientField1D c(scaling_half(), SpaceTimeField::zero());
  const SpectralBasis basis(0.0, 1.0, 16);
  const auto s = hyperbolic::assemble(basis, c, Exec::Serial), p = hyperbolic::assemble(basis, c, Exec::Parallel);
  CHECK(s.panels() == p.panels());
  CHECK(s.at(0.5).stiffness == p.at(0.5).stiffness);
  CHECK(s.at(0.5).transport == p.at(0.5).transport);
}

TEST_CASE("grid solver") {
  const transform::CoefficientField1D c(scaling_half(), SpaceTimeField::zero());
  const auto s = hyperbolic::solve_fd(c, 100, {kSine, {}}, 2e-3, 0.5, Exec::Serial);
  const auto p = hyperbolic::solve_fd(c, 100, {kSine, {}}, 2e-3, 0.5, Exec::Parallel);
  CHECK(s.values.back() == p.values.back());
}

TEST_CASE("energy ledger and fixed-domain balance") {
  const auto fam = scaling_half();
  const transform::CoefficientField1D c(fam, SpaceTimeField::zero());
  const auto tr = hyperbolic::solve_fd(c, 100, {kSine, {}}, 2e-3, 0.5);
  const auto in = energy::ledger_input_1d(fam, tr, SpaceTimeField::zero());
  const auto s = energy::ledger(in, Exec::Serial), p = energy::ledger(in, Exec::Parallel);
  CHECK(s.kinetic == p.kinetic);
  CHECK(s.residual_moving == p.residual_moving);
  CHECK(energy::balance_residual_fixed(tr, c, Exec::Serial) == energy::balance_residual_fixed(tr, c, Exec::Parallel));
}

TEST_CASE("Griffith equivalence sweep") {
  const auto s = griffith::equivalence_sweep(200, 1000, 3, Exec::Serial);
  const auto p = griffith::equivalence_sweep(200, 1000, 3, Exec::Parallel);
  CHECK(s.max_a_vs_mdp == p.max_a_vs_mdp);
  CHECK(s.max_b_vs_mdp == p.max_b_vs_mdp);
}

TEST_CASE("exceptions inside parallel loops reach the caller") {
  CHECK_THROWS_AS(for_each_index(Exec::Parallel, 64,
                                 [](std::size_t i) {
                                   if (i == 17) throw Error(Errc::BlowUp, "boom");
                                 }),
                  Error);
}
