#include "movwave/griffith.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "movwave/error.hpp"

namespace movwave::griffith {

namespace {

void require_toughness(double kappa) {
  if (!(kappa > 0.0)) throw Error(Errc::NonPositiveToughness, "toughness must be positive, got " + std::to_string(kappa));
}

}  // namespace

double release_rate(double p, double alpha) { return 0.5 * (1.0 - alpha * alpha) * p * p; }

double flow_rule_a(double p, double kappa) {
  require_toughness(kappa);
  const double p2 = p * p;
  return p2 > 2.0 * kappa ? std::sqrt(1.0 - 2.0 * kappa / p2) : 0.0;
}

double flow_rule_b(double p, double u_dot, double kappa) {
  require_toughness(kappa);
  const double q = (p - u_dot) * (p - u_dot);
  return std::max((q - 2.0 * kappa) / (q + 2.0 * kappa), 0.0);
}

double flow_rule(double p, std::optional<double> u_dot, double kappa) {
  return u_dot ? flow_rule_b(p, *u_dot, kappa) : flow_rule_a(p, kappa);
}

double flow_rule_b_fixed_point(double p, double kappa) {
  require_toughness(kappa);
  auto h = [&](double w) { return flow_rule_b(p, -w * p, kappa) - w; };
  if (h(0.0) <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double mdp_oracle(double p, double kappa, int grid_size) {
  if (grid_size < 100) throw Error(Errc::InvalidArgument, "oracle grid needs at least 100 points");
  const double p2 = p * p;
  const double step = 1.0 / grid_size;
  double best = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double a = i * step;
    const double phi = a * (kappa - release_rate(p, a));
    // A root within half a cell of a: first-order Taylor bound plus curvature.
    const double slope = kappa - 0.5 * p2 + 1.5 * a * a * p2;
    const double slack = 0.5 * step * (std::abs(slope) + 0.75 * p2 * step);
    if (std::abs(phi) <= slack) best = a;
  }
  return best;
}

std::string compatibility_name(Compatibility c) {
  switch (c) {
    case Compatibility::SubcriticalRest: return "SubcriticalRest";
    case Compatibility::ActivatedStart: return "ActivatedStart";
    case Compatibility::Incompatible: return "Incompatible";
  }
  return "Incompatible";
}

Compatibility compatibility_check(double du0, double u1, double kappa, double tol) {
  if (std::abs(u1) <= tol) return du0 * du0 <= 2.0 * kappa + tol ? Compatibility::SubcriticalRest
                                                                  : Compatibility::Incompatible;
  const double gap = du0 * du0 - u1 * u1 - 2.0 * kappa;
  if (std::abs(gap) <= tol * std::max(1.0, 2.0 * kappa) && du0 / u1 < -1.0) return Compatibility::ActivatedStart;
  return Compatibility::Incompatible;
}

GriffithReport griffith_check(const std::vector<FrontObservation>& front, double tol) {
  GriffithReport r;
  r.tol = tol;
  for (const auto& o : front) {
    GriffithSample s;
    s.t = o.t;
    s.x = o.x;
    s.omega = o.omega;
    s.p = o.p;
    s.kappa = o.kappa;
    s.G = release_rate(o.p, o.omega);
    s.activated = o.omega > 0.0;
    s.complementarity = o.omega * (s.G - o.kappa);
    const bool subsonic = o.omega >= 0.0 && o.omega < 1.0;
    s.pass = subsonic && s.G <= o.kappa + tol && std::abs(s.complementarity) <= tol;
    r.max_excess = std::max(r.max_excess, s.G - o.kappa);
    r.max_complementarity = std::max(r.max_complementarity, std::abs(s.complementarity));
    r.max_speed = std::max(r.max_speed, o.omega);
    r.pass = r.pass && s.pass;
    r.samples.push_back(s);
  }
  return r;
}

double EquivalenceReport::max_discrepancy() const { return std::max({max_a_vs_b, max_a_vs_mdp, max_b_vs_mdp}); }

EquivalenceReport equivalence_sweep(int pairs, int grid_size, std::uint64_t seed, Exec exec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pd(0.0, 5.0), kd(0.1, 5.0);
  std::vector<double> ps(static_cast<std::size_t>(pairs)), ks(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ps[i] = pd(rng);
    ks[i] = kd(rng);
  }
  struct Row {
    double ab, am, bm, id;
  };
  std::vector<Row> rows(ps.size());
  for_each_index(exec, ps.size(), [&](std::size_t i) {
    const double a = flow_rule_a(ps[i], ks[i]);
    const double b = flow_rule_b_fixed_point(ps[i], ks[i]);
    const double m = mdp_oracle(ps[i], ks[i], grid_size);
    rows[i] = {std::abs(a - b), std::abs(a - m), std::abs(b - m),
               a > 0.0 ? std::abs(release_rate(ps[i], a) - ks[i]) : 0.0};
  });
  EquivalenceReport r;
  r.pairs = pairs;
  r.grid_size = grid_size;
  for (const Row& row : rows) {
    r.max_a_vs_b = std::max(r.max_a_vs_b, row.ab);
    r.max_a_vs_mdp = std::max(r.max_a_vs_mdp, row.am);
    r.max_b_vs_mdp = std::max(r.max_b_vs_mdp, row.bm);
    r.max_activated_identity = std::max(r.max_activated_identity, row.id);
  }
  return r;
}

}  // namespace movwave::griffith
