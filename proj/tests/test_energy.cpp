#include <cmath>

#include "doctest.h"
#include "movwave/energy.hpp"
#include "movwave/hyperbolic.hpp"

using namespace movwave;
using namespace movwave::energy;
using geometry::ReferenceDomain;

namespace {

const double kPi = M_PI;

// Exact standing wave cos(pi t) sin(pi x) sampled on [0, 1].
LedgerInput standing_wave(int points, int times) {
  LedgerInput in;
  for (int k = 0; k <= times; ++k) {
    const double t = static_cast<double>(k) / times;
    Slice s;
    s.t = t;
    for (int i = 0; i <= points; ++i) {
      const double x = static_cast<double>(i) / points;
      s.x.push_back(x);
      s.u.push_back(std::cos(kPi * t) * std::sin(kPi * x));
      s.u_t.push_back(-kPi * std::sin(kPi * t) * std::sin(kPi * x));
      s.u_x.push_back(kPi * std::cos(kPi * t) * std::cos(kPi * x));
    }
    in.slices.push_back(s);
    in.traces.push_back({t, {{0.0, 0.0, -kPi * std::cos(kPi * t), 1.0}, {1.0, 0.0, -kPi * std::cos(kPi * t), 1.0}}});
    in.front.push_back(1.0);
  }
  return in;
}

}  // namespace

TEST_CASE("standing wave conserves energy") {
  const auto l = ledger(standing_wave(4000, 100));
  for (std::size_t k = 0; k < l.t.size(); ++k) {
    CHECK(l.kinetic[k] + l.potential[k] == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-6));
    CHECK(l.boundary_dissipation[k] == 0.0);
    CHECK(l.residual_moving[k] <= 1e-6);
    CHECK_FALSE(l.G_total[k].has_value());
  }
}

TEST_CASE("zero solution has an empty ledger") {
  LedgerInput in = standing_wave(100, 10);
  for (auto& s : in.slices) {
    std::fill(s.u.begin(), s.u.end(), 0.0);
    std::fill(s.u_t.begin(), s.u_t.end(), 0.0);
    std::fill(s.u_x.begin(), s.u_x.end(), 0.0);
  }
  for (auto& tr : in.traces)
    for (auto& p : tr.points) p.p = 0.0;
  const auto l = ledger(in);
  for (std::size_t k = 0; k < l.t.size(); ++k) {
    CHECK(l.kinetic[k] == 0.0);
    CHECK(l.potential[k] == 0.0);
    CHECK(l.work[k] == 0.0);
    CHECK(l.residual_moving[k] == 0.0);
  }
}

TEST_CASE("debonding dissipation on the scaling interval") {
  const auto fam = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  const transform::CoefficientField1D c(fam, SpaceTimeField::zero());
  const auto tr = hyperbolic::solve_fd(c, 200, {[](double y) { return std::sin(kPi * y); }, {}}, 1e-3, 1.0);
  const auto l = ledger(ledger_input_1d(fam, tr, SpaceTimeField::zero(), Expr::constant(1.0), 10));
  for (std::size_t k = 0; k < l.t.size(); ++k) {
    CHECK(l.debond_dissipation[k] == doctest::Approx(l.t[k] / 2.0).epsilon(1e-12));
    CHECK(l.debond_direct[k] == doctest::Approx(fam.geometric_measure(l.t[k]) - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("moving balance residual decreases under refinement") {
  const auto fam = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  const transform::CoefficientField1D c(fam, SpaceTimeField::zero());
  auto residual = [&](int n) {
    const auto tr = hyperbolic::solve_fd(c, n, {[](double y) { return std::sin(kPi * y); }, {}}, 1e-3, 1.0);
    double worst = 0.0;
    for (double r : ledger(ledger_input_1d(fam, tr, SpaceTimeField::zero())).residual_moving) worst = std::max(worst, r);
    return worst;
  };
  const double coarse = residual(200), fine = residual(400);
  CHECK(coarse <= 5e-3);
  CHECK(coarse / fine >= 1.3);
}

TEST_CASE("fixed-domain balance with remainder") {
  SUBCASE("identity coefficients, standing wave") {
    const auto fam = geometry::identity_family(ReferenceDomain::interval(1.0), 1.0);
    const transform::CoefficientField1D c(fam, SpaceTimeField::zero());
    const auto sys = hyperbolic::assemble(SpectralBasis(0.0, 1.0, 8), c);
    const auto tr = hyperbolic::integrate(sys, sys.project([](double y) { return std::sin(kPi * y); }), VecX::Zero(8), 1e-3, 1.0);
    const auto r = balance_residual_fixed(tr, c);
    CHECK(*std::max_element(r.begin(), r.end()) <= 1e-6);

    Trajectory zero = tr;
    for (auto& v : zero.values) v.setZero();
    for (auto& v : zero.velocities) v.setZero();
    for (double x : balance_residual_fixed(zero, c)) CHECK(x == 0.0);
  }
  SUBCASE("scaling family, transformed run") {
    const auto fam = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
    const transform::CoefficientField1D c(fam, SpaceTimeField::zero());
    const auto sys = hyperbolic::assemble(SpectralBasis(0.0, 1.0, 32), c);
    const auto tr = hyperbolic::integrate(sys, sys.project([](double y) { return std::sin(kPi * y); }), VecX::Zero(32), 1e-3, 1.0);
    const auto r = balance_residual_fixed(tr, c);
    CHECK(*std::max_element(r.begin(), r.end()) <= 1e-3);
  }
}

TEST_CASE("total release rate") {
  // Only the moving endpoint has omega > 0.
  const BoundaryTrace one_d{0.3, {{0.0, 0.0, 5.0, 1.0}, {1.2, 0.5, -2.0, 1.0}}};
  CHECK(total_release_rate(one_d).value() == doctest::Approx(0.5 * 0.75 * 4.0));
  const BoundaryTrace still{0.3, {{0.0, 0.0, 5.0, 1.0}, {1.0, 0.0, -2.0, 1.0}}};
  CHECK_FALSE(total_release_rate(still).has_value());
  // Radial inner circle: omega and p constant, weight 2 pi (R - rho).
  const BoundaryTrace radial{0.1, {{0.0, 0.0, 1.0, 2 * kPi * 2.0}, {0.6, 0.7, 1.8, 2 * kPi * 1.4}}};
  CHECK(total_release_rate(radial).value() == doctest::Approx(0.5 * (1 - 0.49) * 1.8 * 1.8));
}

TEST_CASE("flux-integrated measure equals the geometric one") {
  const auto ann = geometry::sublevel_family(geometry::LevelFunction::norm(2), 1.0, Expr::affine(0.2, 0.1), 1.0);
  CHECK(flux_measure(ann, 1.0, 16, 64) == doctest::Approx(ann.geometric_measure(1.0)).epsilon(1e-10));
  const auto sc = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  CHECK(flux_measure(sc, 0.6) == doctest::Approx(1.3).epsilon(1e-13));
}
