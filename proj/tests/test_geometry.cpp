#include <cmath>

#include "doctest.h"
#include "movwave/error.hpp"
#include "movwave/geometry.hpp"

using namespace movwave;
using namespace movwave::geometry;

namespace {

MotionFamily scaling_half() { return scaling_family(Expr::affine(1.0, 0.5), 1.0); }

}  // namespace

TEST_CASE("identity family maps every point to itself") {
  const auto fam = identity_family(ReferenceDomain::interval(1.0), 1.0);
  for (double t : {0.0, 0.3, 1.0})
    for (double y : {0.0, 0.25, 1.0}) {
      const MotionJet j = fam.jet(t, vec1(y));
      CHECK(j.phi(0) == doctest::Approx(y));
      CHECK(j.dphi(0, 0) == doctest::Approx(1.0));
      CHECK(j.phi_t(0) == 0.0);
      CHECK(j.det_dphi == doctest::Approx(1.0));
      CHECK(j.psi_t(0) == 0.0);
    }
}

TEST_CASE("scaling jet at (1, 0.5) matches hand differentiation") {
  const MotionJet j = scaling_half().jet(1.0, vec1(0.5));
  CHECK(j.phi(0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(j.dphi(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(j.det_dphi == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(j.phi_t(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(j.dpsi(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(j.psi_t(0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("homothetic determinant is lambda^N") {
  const Expr lambda = Expr::affine(1.0, 0.3);
  const auto ball = homothetic_family(ReferenceDomain::ball(1.0, 2), lambda, 1.0);
  const auto tet = homothetic_family(ReferenceDomain::tetrahedron(vec3(1.0, 2.0, 2.0) / 3.0, 1.0), lambda, 1.0);
  CHECK(ball.jet(0.7, vec2(0.2, 0.1)).det_dphi == doctest::Approx(std::pow(1.21, 2)).epsilon(1e-13));
  CHECK(tet.jet(0.7, vec3(0.1, 0.1, 0.1)).det_dphi == doctest::Approx(std::pow(1.21, 3)).epsilon(1e-13));
}

TEST_CASE("sublevel family on |x| produces shrinking-hole annuli") {
  const auto fam = sublevel_family(LevelFunction::norm(2), 1.0, Expr::affine(0.2, 0.1), 1.0);
  // Omega_t = {0.8 - 0.1 t < |x| < 1}.
  CHECK(fam.contains(1.0, vec2(0.75, 0.0)));
  CHECK_FALSE(fam.contains(0.0, vec2(0.75, 0.0)));
  CHECK(fam.geometric_measure(1.0) == doctest::Approx(M_PI * (1.0 - 0.49)).epsilon(1e-12));
}

TEST_CASE("validate reports identity and scaling families") {
  const auto id = validate(identity_family(ReferenceDomain::interval(1.0), 1.0));
  CHECK(id.pass());
  CHECK(id.max_speed == 0.0);
  CHECK(id.max_identity_residual() == 0.0);

  const auto sc = validate(scaling_half());
  CHECK(sc.max_speed == doctest::Approx(0.5));
  CHECK(sc.h2_pass);
  CHECK(sc.max_identity_residual() <= 1e-12);

  const auto fast = validate(scaling_family(Expr::affine(1.0, 1.2), 1.0));
  CHECK(fast.max_speed == doctest::Approx(1.2));
  CHECK_FALSE(fast.h2_pass);
  CHECK_FALSE(fast.pass());
}

TEST_CASE("validate passes the flow families within the looser tolerance") {
  const auto ann = validate(sublevel_family(LevelFunction::norm(2), 1.0, Expr::affine(0.2, 0.1), 1.0));
  CHECK(ann.pass());
  CHECK(ann.max_identity_residual() <= 1e-6);
}

TEST_CASE("boundary kinematics: scaling endpoints") {
  const auto fam = scaling_half();
  const auto s = boundary_kinematics(fam, 0.4, fam.reference().boundary_samples(1));
  REQUIRE(s.size() == 2);
  for (const auto& b : s) {
    if (b.x(0) < 0.5)
      CHECK(b.omega == doctest::Approx(0.0));
    else
      CHECK(b.omega == doctest::Approx(0.5));
  }
}

TEST_CASE("boundary kinematics: homothetic ball has omega = lambda dot") {
  const auto fam = homothetic_family(ReferenceDomain::ball(1.0, 2), Expr::affine(1.0, 0.3), 1.0);
  for (const auto& b : boundary_kinematics(fam, 0.5, fam.reference().boundary_samples(16)))
    CHECK(b.omega == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("boundary kinematics: tetrahedron faces") {
  const Vec n = vec3(1.0, 2.0, 2.0) / 3.0;
  const auto fam = homothetic_family(ReferenceDomain::tetrahedron(n, 1.0), Expr::affine(1.0, 0.3), 1.0);
  int slanted = 0, coordinate = 0;
  for (const auto& b : boundary_kinematics(fam, 0.5, fam.reference().boundary_samples(6))) {
    const bool on_coordinate_face = std::abs(b.normal.dot(n) - 1.0) > 1e-9;
    if (on_coordinate_face) {
      CHECK(std::abs(b.omega) <= 1e-12);
      ++coordinate;
    } else {
      CHECK(b.omega == doctest::Approx(0.3).epsilon(1e-12));
      ++slanted;
    }
  }
  CHECK(slanted > 0);
  CHECK(coordinate > 0);
}

TEST_CASE("level identity along the numerical flow") {
  // rho: 0.2 -> 0.3 at t = 1, so 1 - |Phi| = 1.5 (1 - |y|).
  const auto fam = sublevel_family(LevelFunction::norm(2), 1.0, Expr::affine(0.2, 0.1), 1.0);
  const Vec x = fam.map(1.0, vec2(0.9, 0.0));
  CHECK(x.norm() == doctest::Approx(0.85).epsilon(1e-8));
  CHECK(check_level_identity(fam, 1.0, vec2(0.9, 0.0)) <= 1e-8);
  CHECK(check_level_identity(fam, 0.0, vec2(0.9, 0.0)) == 0.0);

  const auto frozen = sublevel_family(LevelFunction::norm(2), 1.0, Expr::constant(0.2), 1.0);
  CHECK((frozen.map(0.7, vec2(0.0, 0.9)) - vec2(0.0, 0.9)).norm() == 0.0);
  CHECK(check_level_identity(frozen, 0.7, vec2(0.0, 0.9)) == 0.0);
}

TEST_CASE("speed condition margin") {
  CHECK(check_speed_condition(sublevel_family(LevelFunction::norm(2), 1.0, Expr::affine(0.2, 0.1), 1.0)) ==
        doctest::Approx(0.9).epsilon(1e-12));
  CHECK(check_speed_condition(sublevel_family(LevelFunction::norm(2), 1.0, Expr::constant(0.2), 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(check_speed_condition(sublevel_family(LevelFunction::norm(2), 1.0, Expr::affine(0.2, 1.5), 0.4)) ==
        doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("invalid motions are rejected") {
  CHECK_THROWS_AS(scaling_family(Expr::affine(1.0, -2.0), 1.0), Error);
  try {
    (void)scaling_family(Expr::affine(1.0, -2.0), 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveScale);
  }
}
