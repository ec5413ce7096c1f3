#include <cmath>

#include "doctest.h"
#include "movwave/characteristics.hpp"
#include "movwave/error.hpp"
#include "movwave/hyperbolic.hpp"

using namespace movwave;
using namespace movwave::characteristics;

namespace {

const double kSqrt2 = std::sqrt(2.0);

CharScenario constant_data(double horizon = 5.0) {
  CharScenario sc;
  sc.l0 = 1.0;
  sc.u0 = Expr::affine(2.0, -2.0);
  sc.u1 = Expr::constant(kSqrt2);
  sc.kappa = Expr::constant(1.0);
  sc.horizon = horizon;
  return sc;
}

}  // namespace

TEST_CASE("d'Alembert on the fixed interval") {
  const Expr s = Expr::sine_mode(1.0, 1);
  const Expr zero = Expr::constant(0.0);
  CHECK(std::abs(dalembert_fixed(1.0, s, zero, SpaceTimeField::zero(), 0.5, 0.5)) <= 1e-12);
  CHECK(dalembert_fixed(1.0, s, zero, SpaceTimeField::zero(), 0.37, 0.81) ==
        doctest::Approx(std::cos(M_PI * 0.37) * std::sin(M_PI * 0.81)).epsilon(1e-10));
  CHECK(dalembert_fixed(1.0, zero, zero, SpaceTimeField::zero(), 0.7, 0.2) == 0.0);

  // Before any reflection: u = (u0(x+t) + u0(x-t))/2 + (1/2) int u1.
  const Expr u0 = Expr::poly({0.0, 1.0, -1.0});
  const Expr u1 = Expr::affine(1.0, 2.0);
  const double t = 0.1, x = 0.4;
  const double expected = 0.5 * (u0(x + t) + u0(x - t)) + 0.5 * ((x + t) + (x + t) * (x + t) - (x - t) - (x - t) * (x - t));
  CHECK(dalembert_fixed(1.0, u0, u1, SpaceTimeField::zero(), t, x) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("d'Alembert with forcing satisfies the wave equation") {
  const auto f = SpaceTimeField::parse("Separable(Const(1), SineMode(1, 2))");
  const Expr zero = Expr::constant(0.0);
  auto U = [&](double t, double x) { return dalembert_fixed(1.0, zero, zero, f, t, x); };
  const double h = 1e-3, t = 0.4, x = 0.3;
  const double r = (U(t + h, x) - 2 * U(t, x) + U(t - h, x)) / (h * h) - (U(t, x + h) - 2 * U(t, x) + U(t, x - h)) / (h * h) - f(t, x);
  CHECK(std::abs(r) <= 1e-4);
}

TEST_CASE("constant-data front moves at sqrt(2)/2") {
  const auto fh = front_ode_exact(constant_data());
  for (double s : fh.speed) CHECK(s == doctest::Approx(kSqrt2 / 2.0).epsilon(1e-12));
  CHECK(fh.t_star == doctest::Approx(1.0 / (1.0 - kSqrt2 / 2.0)).epsilon(1e-9));
  CHECK(fh.reached_characteristic_limit);
  for (std::size_t k = 0; k < fh.times.size(); k += 200)
    CHECK(fh.length[k] == doctest::Approx(1.0 + fh.times[k] * kSqrt2 / 2.0).epsilon(1e-12));
  CHECK(characteristic_invariant(constant_data(), 0.5, 1.2) == doctest::Approx(-2.0 - kSqrt2));
}

TEST_CASE("subcritical and critical fronts stay put") {
  CharScenario rest = constant_data(1.0);
  rest.u0 = Expr::affine(1.0, -1.0);  // u0'^2 = 1 <= 2 kappa
  rest.u1 = Expr::constant(0.0);
  CHECK(scenario_compatibility(rest) == griffith::Compatibility::SubcriticalRest);
  for (double l : front_ode_exact(rest).length) CHECK(l == 1.0);

  CharScenario critical = constant_data(1.0);
  critical.u0 = Expr::affine(kSqrt2, -kSqrt2);  // F^2 = 2 kappa exactly
  critical.u1 = Expr::constant(0.0);
  // sqrt(2)^2 rounds above 2, and omega grows like the square root of the excess.
  for (double s : front_ode_exact(critical).speed) CHECK(s <= 1e-7);
}

TEST_CASE("incompatible front data are rejected") {
  CharScenario bad = constant_data(1.0);
  bad.u1 = Expr::constant(1.0);
  CHECK(scenario_compatibility(bad) == griffith::Compatibility::Incompatible);
  try {
    (void)front_ode_exact(bad);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CompatibilityViolated);
  }
}

TEST_CASE("front trace of sampled fields") {
  // u(x) = x (l - x) with l = 1.3: du/dnu at x = l is -l.
  const double l = 1.3, h = 1e-3;
  std::vector<double> u, ut, zero(6, 0.0);
  for (int i = 0; i < 6; ++i) {
    const double x = l - i * h;
    u.push_back(x * (l - x));
    ut.push_back(0.0);
  }
  const auto tr = front_trace(u, ut, h);
  CHECK(tr.normal_derivative == doctest::Approx(-l).epsilon(1e-10));
  const auto z = front_trace(zero, zero, h);
  CHECK(z.normal_derivative == 0.0);
  CHECK(z.velocity == 0.0);
  CHECK_THROWS_AS(front_trace(std::span<const double>(u.data(), 3), std::span<const double>(ut.data(), 3), h), Error);
}

TEST_CASE("front trace of the standing wave") {
  const auto fam = geometry::identity_family(geometry::ReferenceDomain::interval(0.0, 1.0), 1.0);
  const transform::CoefficientField1D c(fam, SpaceTimeField::zero());
  const auto tr = hyperbolic::solve_fd(c, 400, {[](double y) { return std::sin(M_PI * y); }, {}}, 1e-3, 1.0);
  for (double t : {0.2, 0.5, 0.8}) {
    const auto ft = front_trace(tr, fam, t);
    CHECK(ft.normal_derivative == doctest::Approx(-M_PI * std::cos(M_PI * t)).epsilon(1e-4).scale(1.0));
    // Quadratic extrapolation error: h^3 max|d^3 u_t / dx^3| <= pi^4 / 400^3.
    CHECK(std::abs(ft.velocity) <= 1.05 * std::pow(M_PI, 4) / std::pow(400.0, 3));
  }
}
