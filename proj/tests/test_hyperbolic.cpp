#include <cmath>

#include "doctest.h"
#include "movwave/error.hpp"
#include "movwave/hyperbolic.hpp"

using namespace movwave;
using namespace movwave::hyperbolic;
using geometry::ReferenceDomain;

namespace {

const double kPi = M_PI;

geometry::MotionFamily unit_identity() { return geometry::identity_family(ReferenceDomain::interval(1.0), 1.0); }
geometry::MotionFamily scaling_half() { return geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0); }

double sine(double y) { return std::sin(kPi * y); }

// Space-time L2 distance of two pushed-forward solutions on the family.
double l2_distance(const geometry::MotionFamily& fam, const Trajectory& a, const Trajectory& b) {
  double total = 0.0;
  const int nt = 50, nx = 200;
  for (int k = 0; k <= nt; ++k) {
    const double t = fam.horizon() * k / nt;
    const double len = fam.scale(t);
    double s = 0.0;
    for (int i = 0; i <= nx; ++i) {
      const Vec x = vec1(len * i / nx);
      const auto pa = transform::pushforward(fam, a, t, x), pb = transform::pushforward(fam, b, t, x);
      const double d = (pa.outside ? 0.0 : pa.u) - (pb.outside ? 0.0 : pb.u);
      s += (i == 0 || i == nx ? 0.5 : 1.0) * d * d * len / nx;
    }
    total += (k == 0 || k == nt ? 0.5 : 1.0) * s * fam.horizon() / nt;
  }
  return std::sqrt(total);
}

}  // namespace

TEST_CASE("identity Galerkin matrices are diagonal") {
  const CoefficientField1D c(unit_identity(), SpaceTimeField::zero());
  const auto sys = assemble(SpectralBasis(0.0, 1.0, 3), c);
  const auto m = sys.at(0.4);
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      const double expected = l == k ? std::pow((k + 1) * kPi, 2) : 0.0;
      CHECK(m.stiffness(k, l) == doctest::Approx(expected).epsilon(1e-11).scale(1.0));
      CHECK(std::abs(m.drift(k, l)) <= 1e-14);
      CHECK(std::abs(m.transport(k, l)) <= 1e-14);
    }
  CHECK(m.load.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scaling stiffness entry against brute-force quadrature") {
  const CoefficientField1D c(scaling_half(), SpaceTimeField::zero());
  const auto sys = assemble(SpectralBasis(0.0, 1.0, 4), c);
  // B(0, y) = 1 - (y/2)^2; w_1' = sqrt(2) pi cos(pi y). Trapezoid with 1e6 cells.
  const int n = 1000000;
  double ref = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = static_cast<double>(i) / n;
    const double w = std::sqrt(2.0) * kPi * std::cos(kPi * y);
    ref += (i == 0 || i == n ? 0.5 : 1.0) * (1.0 - 0.25 * y * y) * w * w / n;
  }
  CHECK(sys.at(0.0).stiffness(0, 0) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("Galerkin oscillator solutions") {
  const CoefficientField1D c(unit_identity(), SpaceTimeField::zero());
  const auto sys = assemble(SpectralBasis(0.0, 1.0, 4), c);
  VecX e1 = VecX::Zero(4);
  e1(0) = 1.0;
  const auto pos = integrate(sys, e1, VecX::Zero(4), 1e-3, 1.0);
  CHECK(pos.values.back()(0) == doctest::Approx(-1.0).epsilon(1e-10));
  const auto vel = integrate(sys, VecX::Zero(4), e1, 1e-3, 1.0);
  CHECK(vel.values[500](0) == doctest::Approx(1.0 / kPi).epsilon(1e-10));
  const auto zero = integrate(sys, VecX::Zero(4), VecX::Zero(4), 1e-3, 1.0);
  CHECK(zero.values.back().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("grid solver on the standing wave") {
  const CoefficientField1D c(unit_identity(), SpaceTimeField::zero());
  const auto tr = solve_fd(c, 200, {sine, {}}, 1e-3, 1.0);
  CHECK(std::abs(tr.sample(500, 0.5).v) <= 5e-3);
  CHECK(tr.sample(1000, 0.3).v == doctest::Approx(-std::sin(0.3 * kPi)).epsilon(1e-4));
  const auto zero = solve_fd(c, 200, {[](double) { return 0.0; }, {}}, 1e-3, 1.0);
  CHECK(zero.values.back().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("modal and grid solvers agree on the moving interval") {
  const auto fam = scaling_half();
  const CoefficientField1D c(fam, SpaceTimeField::zero());
  const auto sys = assemble(SpectralBasis(0.0, 1.0, 32), c);
  const auto modal = integrate(sys, sys.project(sine), VecX::Zero(32), 1e-3, 1.0);
  const auto grid = solve_fd(c, 400, {sine, {}}, 1e-3, 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < modal.size(); k += 50) {
    double s = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double d = modal.sample(k, i / 400.0).v - grid.sample(k, i / 400.0).v;
      s += (i == 0 || i == 400 ? 0.5 : 1.0) * d * d / 400.0;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  CHECK(worst <= 1e-2);
}

TEST_CASE("grid solver rejects steps above the CFL bound") {
  const CoefficientField1D c(unit_identity(), SpaceTimeField::zero());
  try {
    (void)solve_fd(c, 400, {sine, {}}, 1e-2, 1.0);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CflViolation);
  }
}

TEST_CASE("cylinder scheme") {
  const Expr u0 = Expr::sine_mode(1.0, 1);
  const Expr u1 = Expr::product(Expr::affine(0.0, -0.5), Expr::derivative(u0, 1));

  SUBCASE("static domain coincides with the grid solver") {
    const auto fam = unit_identity();
    const auto cyl = solve_cylinder(fam, u0, Expr::constant(0.0), SpaceTimeField::zero(), 8, {200, 1e-3});
    const auto fd = solve_fd(CoefficientField1D(fam, SpaceTimeField::zero()), 200, {sine, {}}, 1e-3, 1.0);
    CHECK(std::abs(cyl.trajectory.sample_at(1.0, 0.3).v - fd.sample_at(1.0, 0.3).v) <= 1e-9);
  }

  SUBCASE("one partition is a plain fixed-domain solve") {
    const auto cyl = solve_cylinder(scaling_half(), u0, u1, SpaceTimeField::zero(), 1, {200, 1e-3});
    const auto fd = solve_fd(CoefficientField1D(unit_identity(), SpaceTimeField::zero()), 200,
                             {sine, [&](double y) { return u1(y); }}, 1e-3, 1.0);
    CHECK(std::abs(cyl.trajectory.sample_at(1.0, 0.4).v - fd.sample_at(1.0, 0.4).v) <= 1e-9);
  }

  SUBCASE("refining the partition approaches the transformed solution") {
    const auto fam = scaling_half();
    const CoefficientField1D c(fam, SpaceTimeField::zero());
    const auto sys = assemble(SpectralBasis(0.0, 1.0, 32), c);
    const auto ref = integrate(sys, sys.project(sine), VecX::Zero(32), 1e-3, 1.0);
    double previous = 1e300;
    for (int n : {8, 16, 32}) {
      const auto cyl = solve_cylinder(fam, u0, u1, SpaceTimeField::zero(), n, {200, 1e-3});
      const double d = l2_distance(fam, ref, cyl.trajectory);
      CHECK(d < previous);
      previous = d;
      for (std::size_t k = 0; k < cyl.energy_before.size(); ++k)
        CHECK(cyl.energy_after[k] <= cyl.energy_before[k] + 1e-14);
    }
  }
}

TEST_CASE("weak residual separates solutions from non-solutions") {
  const CoefficientField1D c(unit_identity(), SpaceTimeField::zero());
  const SpectralBasis basis(0.0, 1.0, 8);
  const auto sys = assemble(basis, c);
  const auto probes = basis_probes(basis);

  // Exact harmonic coefficients d_1 = cos(pi t) / sqrt(2) sampled at dt = 1e-3.
  Trajectory exact;
  exact.representation = Trajectory::Representation::Modal;
  for (int k = 0; k <= 1000; ++k) {
    const double t = k * 1e-3;
    VecX d = VecX::Zero(8), v = VecX::Zero(8);
    d(0) = std::cos(kPi * t) / std::sqrt(2.0);
    v(0) = -kPi * std::sin(kPi * t) / std::sqrt(2.0);
    exact.times.push_back(t);
    exact.values.push_back(d);
    exact.velocities.push_back(v);
  }
  CHECK(weak_residual(exact, c, probes) <= 1e-6);

  Trajectory zero = exact;
  for (auto& v : zero.values) v.setZero();
  for (auto& v : zero.velocities) v.setZero();
  CHECK(weak_residual(zero, c, probes) == 0.0);

  Trajectory corrupted = exact;
  for (std::size_t k = 0; k < corrupted.size(); ++k) {
    corrupted.values[k](0) *= 1.0 + 0.1 * corrupted.times[k];
    corrupted.velocities[k](0) *= 1.0 + 0.1 * corrupted.times[k];
  }
  CHECK(weak_residual(corrupted, c, probes) > 0.01);
  (void)sys;
}

TEST_CASE("grid energy of a discrete sine") {
  VecX v(101), vt = VecX::Zero(101);
  for (int i = 0; i <= 100; ++i) v(i) = sine(i / 100.0);
  CHECK(grid_energy(v, vt, 0.01) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-3));
}
