#include <cmath>

#include "doctest.h"
#include "movwave/error.hpp"
#include "movwave/transform.hpp"

using namespace movwave;
using namespace movwave::transform;
using geometry::ReferenceDomain;

namespace {

const ScalarField kZero = [](double, const Vec&) { return 0.0; };

}  // namespace

TEST_CASE("identity pullback leaves the operator unchanged") {
  const auto fam = geometry::identity_family(ReferenceDomain::interval(1.0), 1.0);
  const ScalarField f = [](double t, const Vec& x) { return t + x(0); };
  const auto c = pullback_coefficients(fam, f, 0.4, vec1(0.3));
  CHECK(c.B(0, 0) == doctest::Approx(1.0));
  CHECK(c.a(0) == 0.0);
  CHECK(c.b(0) == 0.0);
  CHECK(c.g == doctest::Approx(0.7));
}

TEST_CASE("scaling pullback coefficients") {
  const auto fam = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  const auto c = pullback_coefficients(fam, kZero, 1.0, vec1(0.5));
  CHECK(c.B(0, 0) == doctest::Approx(5.0 / 12.0).epsilon(1e-13));
  CHECK(c.b(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  for (double t : {0.0, 0.3, 0.9})
    for (double y : {0.1, 0.6, 1.0}) {
      const double l = 1.0 + 0.5 * t;
      CHECK(pullback_coefficients(fam, kZero, t, vec1(y)).b(0) == doctest::Approx(0.5 * y / l).epsilon(1e-13));
    }
}

TEST_CASE("pullback of initial velocity") {
  const auto id = geometry::identity_family(ReferenceDomain::interval(1.0), 1.0);
  auto u0 = [](const Vec& y) { return std::sin(M_PI * y(0)); };
  auto g0 = [](const Vec& y) { return vec1(M_PI * std::cos(M_PI * y(0))); };
  auto u1 = [](const Vec& y) { return -0.5 * y(0) * M_PI * std::cos(M_PI * y(0)); };
  CHECK(pullback_initial(id, u0, g0, u1).v1(vec1(0.3)) == doctest::Approx(u1(vec1(0.3))));

  const auto sc = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  const auto d = pullback_initial(sc, u0, g0, u1);
  for (double y : {0.0, 0.2, 0.5, 0.9}) CHECK(std::abs(d.v1(vec1(y))) <= 1e-14);

  auto zero = [](const Vec&) { return 0.0; };
  auto zero_grad = [](const Vec&) { return vec1(0.0); };
  CHECK(pullback_initial(sc, zero, zero_grad, u1).v1(vec1(0.4)) == doctest::Approx(u1(vec1(0.4))));
}

TEST_CASE("ellipticity constant") {
  CHECK(ellipticity_constant(geometry::identity_family(ReferenceDomain::interval(1.0), 1.0)) == doctest::Approx(1.0));
  CHECK(ellipticity_constant(geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  try {
    (void)ellipticity_constant(geometry::scaling_family(Expr::affine(1.0, 1.2), 1.0));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotElliptic);
  }
}

TEST_CASE("pushforward composes with the inverse map") {
  const auto fam = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  Trajectory v;
  v.representation = Trajectory::Representation::Grid;
  v.times = {0.0, 1.0};
  VecX nodes(11);
  for (int i = 0; i <= 10; ++i) nodes(i) = i / 10.0;
  v.values = {nodes, nodes};
  v.velocities = {VecX::Zero(11), VecX::Zero(11)};
  const auto p = pushforward(fam, v, 1.0, vec1(0.9));
  CHECK(p.u == doctest::Approx(0.9 / 1.5).epsilon(1e-12));
  CHECK(p.grad(0) == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
  const auto out = pushforward(fam, v, 1.0, vec1(1.6));
  CHECK(out.outside);
  CHECK(out.u == 0.0);

  const auto id = geometry::identity_family(ReferenceDomain::interval(1.0), 1.0);
  const auto q = pushforward(id, v, 0.5, vec1(0.35));
  CHECK(q.u == doctest::Approx(0.35));
  CHECK(q.grad(0) == doctest::Approx(1.0));
}

TEST_CASE("Dirichlet lifting") {
  const Expr U0 = Expr::sine_mode(1.0, 1), U1 = Expr::constant(0.0);
  const auto none = lift_dirichlet(SpaceTimeField::zero(), U0, U1, {0.0, 1.0});
  CHECK(none.f.is_zero());
  CHECK(none.u0(0.3) == doctest::Approx(U0(0.3)));

  // W = t^2 (1 - x) near x = 0, tapered to zero before x = 1.
  const Expr taper = Expr::sum(Expr::constant(1.0), Expr::product(Expr::constant(-1.0), Expr::smoothstep(0.3, 0.6)));
  const SpaceTimeField W = SpaceTimeField::separable(Expr::poly({0.0, 0.0, 1.0}), Expr::product(Expr::affine(1.0, -1.0), taper));
  const auto lifted = lift_dirichlet(W, U0, U1, {0.0}, [](double) { return 1.0; }, 1.0);
  CHECK(lifted.u0(0.4) == doctest::Approx(U0(0.4)));
  CHECK(lifted.u1(0.4) == 0.0);
  // Independent oracle: f = W_xx - W_tt by central differences.
  const double h = 1e-4;
  for (double t : {0.2, 0.7})
    for (double x : {0.1, 0.35, 0.5, 0.8}) {
      const double wxx = (W(t, x + h) - 2 * W(t, x) + W(t, x - h)) / (h * h);
      const double wtt = (W(t + h, x) - 2 * W(t, x) + W(t - h, x)) / (h * h);
      CHECK(lifted.f(t, x) == doctest::Approx(wxx - wtt).epsilon(1e-5));
    }

  try {
    (void)lift_dirichlet(SpaceTimeField::spatial(Expr::constant(1.0)), U0, U1, {0.0});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BoundaryMismatch);
  }
}

TEST_CASE("time offset shifts forcing") {
  const auto fam = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  CoefficientField1D c(fam, SpaceTimeField::separable(Expr::affine(0.0, 1.0), Expr::constant(1.0)));
  const double g0 = c(0.2, 0.5).g;
  c.set_time_offset(1.0);
  CHECK(c(0.2, 0.5).g == doctest::Approx(g0 + 1.0));
}
