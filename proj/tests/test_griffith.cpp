#include <cmath>

#include "doctest.h"
#include "movwave/energy.hpp"
#include "movwave/error.hpp"
#include "movwave/griffith.hpp"

using namespace movwave;
using namespace movwave::griffith;

namespace {

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

TEST_CASE("flow rule, closed form") {
  CHECK(flow_rule_a(2.0, 1.0) == doctest::Approx(kSqrt2 / 2.0).epsilon(1e-15));
  CHECK(flow_rule_a(1.0, 1.0) == 0.0);
  CHECK(flow_rule_a(-2.0, 1.0) == doctest::Approx(kSqrt2 / 2.0));
  CHECK(flow_rule(2.0, std::nullopt, 1.0) == flow_rule_a(2.0, 1.0));
}

TEST_CASE("flow rule, velocity form on consistent data") {
  // p - u_dot = 2 + sqrt(2) with u_dot = -omega p.
  CHECK(flow_rule_b(2.0, -kSqrt2, 1.0) == doctest::Approx(kSqrt2 / 2.0).epsilon(1e-15));
  CHECK(flow_rule(2.0, -kSqrt2, 1.0) == flow_rule_b(2.0, -kSqrt2, 1.0));
  CHECK(flow_rule_b_fixed_point(2.0, 1.0) == doctest::Approx(kSqrt2 / 2.0).epsilon(1e-12));
  CHECK(flow_rule_b_fixed_point(1.0, 1.0) == 0.0);
}

TEST_CASE("toughness must be positive") {
  for (double kappa : {0.0, -1.0}) {
    try {
      (void)flow_rule_a(2.0, kappa);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NonPositiveToughness);
    }
  }
}

TEST_CASE("maximum dissipation oracle") {
  CHECK(std::abs(mdp_oracle(2.0, 1.0, 10000) - kSqrt2 / 2.0) <= 1e-4);
  CHECK(mdp_oracle(1.0, 1.0, 10000) == 0.0);
  CHECK(mdp_oracle(2.0, 1e9, 10000) == 0.0);
  CHECK_THROWS_AS(mdp_oracle(2.0, 1.0, 10), Error);
}

TEST_CASE("release rate densities") {
  CHECK(energy::release_rate_density(2.0, 0.0) == doctest::Approx(2.0));
  CHECK(energy::release_rate_density(2.0, 0.6) == doctest::Approx(1.28));
  for (double a : {0.0, 0.3, 0.9}) CHECK(energy::release_rate_density(0.0, a) == 0.0);
  // Velocity form with u_dot = -alpha p agrees.
  CHECK(energy::release_rate_density(2.0, 0.6, -1.2) == doctest::Approx(1.28));
  CHECK_THROWS_AS(energy::release_rate_density(2.0, 1.0), Error);
  // On the activated branch the closed form inverts to G = kappa.
  for (double p : {1.5, 2.0, 4.0}) CHECK(release_rate(p, flow_rule_a(p, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("compatibility verdicts") {
  CHECK(compatibility_check(-1.0, 0.0, 1.0) == Compatibility::SubcriticalRest);
  CHECK(compatibility_check(-std::sqrt(3.0), 1.0, 1.0) == Compatibility::ActivatedStart);
  CHECK(compatibility_check(-2.0, kSqrt2, 1.0) == Compatibility::ActivatedStart);
  CHECK(compatibility_check(-2.0, 1.0, 1.0) == Compatibility::Incompatible);
  CHECK(compatibility_name(Compatibility::ActivatedStart) == "ActivatedStart");
}

TEST_CASE("Griffith report on exact and corrupted fronts") {
  std::vector<FrontObservation> exact, still, corrupted;
  for (int k = 0; k < 20; ++k) {
    const double t = 0.05 * k;
    exact.push_back({t, 1.0 + t * kSqrt2 / 2.0, kSqrt2 / 2.0, 2.0, 1.0});  // G at sqrt(2)/2 equals kappa
    still.push_back({t, 1.0, 0.0, 1.0, 1.0});
    corrupted.push_back({t, 1.0 + 0.5 * t, 0.5, 1.0, 1.0});
  }
  const auto a = griffith_check(exact, 1e-3);
  CHECK(a.pass);
  CHECK(a.max_complementarity <= 1e-14);
  for (const auto& s : a.samples) CHECK(s.activated);

  const auto b = griffith_check(still, 1e-3);
  CHECK(b.pass);
  for (const auto& s : b.samples) CHECK_FALSE(s.activated);

  const auto c = griffith_check(corrupted, 1e-3);  // G = 0.375 < kappa - 10 tol
  CHECK_FALSE(c.pass);
}

TEST_CASE("three Griffith forms agree on random pairs") {
  const auto r = equivalence_sweep(1000, 10000, 7);
  CHECK(r.pairs == 1000);
  CHECK(r.max_a_vs_b <= 1e-10);
  CHECK(r.max_discrepancy() <= 2e-4);
  CHECK(r.max_activated_identity <= 1e-12);
  const auto again = equivalence_sweep(1000, 10000, 7, Exec::Serial);
  CHECK(again.max_a_vs_mdp == r.max_a_vs_mdp);
}
