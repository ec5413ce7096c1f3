#include "movwave/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>

#include "movwave/characteristics.hpp"
#include "movwave/coupled.hpp"
#include "movwave/energy.hpp"
#include "movwave/error.hpp"
#include "movwave/griffith.hpp"
#include "movwave/hyperbolic.hpp"
#include "movwave/runner.hpp"
#include "movwave/scenario.hpp"
#include "movwave/transform.hpp"

namespace movwave::verify {

namespace {

using geometry::LevelFunction;
using geometry::ReferenceDomain;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Check upper(std::string label, double measured, double limit) {
  return {std::move(label), measured, limit, Check::Kind::Upper, 0.0};
}
Check lower(std::string label, double measured, double limit) {
  return {std::move(label), measured, limit, Check::Kind::Lower, 0.0};
}
Check range(std::string label, double measured, double lo, double hi) {
  return {std::move(label), measured, lo, Check::Kind::Range, hi};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// Moving-interval scenario shared by the equivalence and energy criteria:
// l(t) = 1 + t/2, u0 = sin(pi y), u1 = -(y/2) pi cos(pi y), f = 0, T = 1.
struct MovingLevel {
  int modes, cells, partitions;
  Trajectory galerkin, fd;
  hyperbolic::CylinderResult cylinder;
  double seconds = 0.0;
};

class Runs {
 public:
  explicit Runs(const Options& o) : opt_(o), fam_(geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0)) {}

  const geometry::MotionFamily& family() const { return fam_; }
  const Options& options() const { return opt_; }

  const MovingLevel& moving(bool refined) {
    auto& slot = refined ? refined_ : baseline_;
    if (!slot) slot = solve_moving(refined ? 64 : 32, refined ? 800 : 400, refined ? 64 : 32);
    return *slot;
  }

  const coupled::CoupledResult& coupled_1d(bool refined, double* seconds = nullptr) {
    auto& slot = refined ? coupled_refined_ : coupled_baseline_;
    auto& secs = refined ? coupled_refined_s_ : coupled_baseline_s_;
    if (!slot) {
      const auto t0 = Clock::now();
      coupled::CoupledOptions o;
      o.cells = refined ? 800 : 400;
      o.dt = refined ? 5e-4 : 1e-3;
      o.exec = opt_.exec;
      slot = coupled::evolve_coupled_1d(lifted_constant_scenario(), o);
      secs = since(t0);
    }
    if (seconds) *seconds = secs;
    return *slot;
  }

  // Constant-data debonding problem: kappa = 1, u0 = 2 - 2x, u1 = sqrt(2), f = 0,
  // l0 = 1, horizon 0.8 T*.
  static characteristics::CharScenario constant_scenario() {
    characteristics::CharScenario sc;
    sc.l0 = 1.0;
    sc.u0 = Expr::affine(2.0, -2.0);
    sc.u1 = Expr::constant(std::numbers::sqrt2);
    sc.kappa = Expr::constant(1.0);
    sc.horizon = 0.8 / (1.0 - std::numbers::sqrt2 / 2.0);
    return sc;
  }

  // The same problem with the nonzero data at x = 0 lifted by the exact
  // solution tapered to vanish on [1, inf).
  static characteristics::CharScenario lifted_constant_scenario() {
    characteristics::CharScenario sc = constant_scenario();
    const SpaceTimeField W = SpaceTimeField::separable(
        Expr::affine(2.0, std::numbers::sqrt2),
        Expr::sum(Expr::constant(1.0), Expr::product(Expr::constant(-1.0), Expr::smoothstep(0.0, 1.0))));
    const transform::LiftedData lifted = transform::lift_dirichlet(W, sc.u0, sc.u1, {0.0});
    sc.u0 = lifted.u0;
    sc.u1 = lifted.u1;
    sc.f = lifted.f;
    return sc;
  }

 private:
  MovingLevel solve_moving(int modes, int cells, int partitions) {
    const auto t0 = Clock::now();
    const double pi = std::numbers::pi;
    MovingLevel lv{modes, cells, partitions, {}, {}, {}, 0.0};
    const transform::CoefficientField1D coeffs(fam_, SpaceTimeField::zero());
    auto v0 = [pi](double y) { return std::sin(pi * y); };
    auto v1 = [](double) { return 0.0; };  // u1 + u0' Phi_t vanishes for this data
    const auto system = hyperbolic::assemble(SpectralBasis(coeffs.lo(), coeffs.hi() - coeffs.lo(), modes), coeffs, opt_.exec);
    lv.galerkin = hyperbolic::integrate(system, system.project(v0), system.project(v1), 1e-3, 1.0);
    lv.fd = hyperbolic::solve_fd(coeffs, cells, {v0, v1}, 1e-3, 1.0, opt_.exec);
    const Expr u0 = Expr::sine_mode(1.0, 1, 1.0);
    const Expr u1 = Expr::product(Expr::affine(0.0, -0.5), Expr::derivative(u0, 1));
    lv.cylinder = hyperbolic::solve_cylinder(fam_, u0, u1, SpaceTimeField::zero(), partitions, {cells, 1e-3}, opt_.exec);
    lv.seconds = since(t0);
    return lv;
  }

  Options opt_;
  geometry::MotionFamily fam_;
  std::optional<MovingLevel> baseline_, refined_;
  std::optional<coupled::CoupledResult> coupled_baseline_, coupled_refined_;
  double coupled_baseline_s_ = 0.0, coupled_refined_s_ = 0.0;
};

// Space-time L2 distance of two solutions on the moving interval.
double l2_gap(const geometry::MotionFamily& fam, const Trajectory& a, const Trajectory& b, Exec exec) {
  constexpr int kTimes = 100, kPoints = 400;
  std::vector<double> slice(kTimes + 1);
  for_each_index(exec, slice.size(), [&](std::size_t k) {
    const double t = static_cast<double>(k) / kTimes;
    const double len = fam.scale(t);
    double s = 0.0;
    for (int i = 0; i <= kPoints; ++i) {
      const Vec x = vec1(len * i / kPoints);
      const auto pa = transform::pushforward(fam, a, t, x);
      const auto pb = transform::pushforward(fam, b, t, x);
      const double d = (pa.outside ? 0.0 : pa.u) - (pb.outside ? 0.0 : pb.u);
      s += (i == 0 || i == kPoints ? 0.5 : 1.0) * d * d;
    }
    slice[k] = s * len / kPoints;
  });
  double total = 0.0;
  for (std::size_t k = 0; k < slice.size(); ++k) total += (k == 0 || k == slice.size() - 1 ? 0.5 : 1.0) * slice[k];
  return std::sqrt(total / kTimes);
}

Criterion c1_identities(const Options& o) {
  const auto t0 = Clock::now();
  double analytic = 0.0, flow = 0.0;
  for (const auto& nf : builtin_families()) {
    const double r = geometry::validate(nf.family, {20, 20}, o.exec).max_identity_residual();
    (nf.flow ? flow : analytic) = std::max(nf.flow ? flow : analytic, r);
  }
  Criterion c{1, "jacobian-identities", {}, 0.0, 2.0, ""};
  c.checks.push_back(upper("analytic_residual", analytic, 1e-9 * o.tol_scale));
  c.checks.push_back(upper("sublevel_residual", flow, 1e-6 * o.tol_scale));
  c.seconds = since(t0);
  return c;
}

Criterion c2_omega(const Options& o) {
  const auto t0 = Clock::now();
  const auto scaling = geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0);
  const auto flow = geometry::sublevel_family(LevelFunction::affine_1d(2.0, -1.0), 2.0, Expr::affine(1.0, 0.5), 1.0);
  double gap = 0.0;
  int samples = 0;
  for (int i = 0; i < 25; ++i) {
    const double t = i / 24.0;
    const auto a = geometry::boundary_kinematics(scaling, t, scaling.reference().boundary_samples(1));
    const auto b = geometry::boundary_kinematics(flow, t, flow.reference().boundary_samples(1));
    // Match boundary points by position.
    for (const auto& sa : a) {
      const auto it = std::min_element(b.begin(), b.end(), [&](const auto& p, const auto& q) {
        return std::abs(p.x(0) - sa.x(0)) < std::abs(q.x(0) - sa.x(0));
      });
      gap = std::max(gap, std::abs(it->omega - sa.omega));
      gap = std::max(gap, std::abs(it->x(0) - sa.x(0)));
      ++samples;
    }
  }
  Criterion c{2, "omega-well-defined", {}, 0.0, 0.0, std::to_string(samples) + " boundary samples"};
  c.checks.push_back(upper("max_omega_gap", gap, 1e-6 * o.tol_scale));
  c.seconds = since(t0);
  return c;
}

Criterion c3_ellipticity(const Options& o) {
  const auto t0 = Clock::now();
  double smallest = std::numeric_limits<double>::infinity();
  int counted = 0;
  for (const auto& nf : builtin_families()) {
    if (!geometry::validate(nf.family, {20, 20}, o.exec).h2_pass) continue;
    smallest = std::min(smallest, transform::ellipticity_constant(nf.family, {20, 20}, o.exec));
    ++counted;
  }
  const double cb = transform::ellipticity_constant(geometry::scaling_family(Expr::affine(1.0, 0.5), 1.0), {20, 20}, o.exec);
  Criterion c{3, "ellipticity", {}, 0.0, 0.0, std::to_string(counted) + " families"};
  c.checks.push_back(lower("min_c_B", smallest, 0.0));
  c.checks.push_back(upper("scaling_c_B_error", std::abs(cb - 1.0 / 3.0), 1e-10 * o.tol_scale));
  c.seconds = since(t0);
  return c;
}

Criterion c4_equivalence(Runs& runs) {
  const auto& o = runs.options();
  const auto t0 = Clock::now();
  const auto& base = runs.moving(false);
  const auto& fine = runs.moving(true);
  const auto& fam = runs.family();
  auto gaps = [&](const MovingLevel& lv) {
    return std::array<double, 3>{l2_gap(fam, lv.galerkin, lv.fd, o.exec), l2_gap(fam, lv.galerkin, lv.cylinder.trajectory, o.exec),
                                 l2_gap(fam, lv.fd, lv.cylinder.trajectory, o.exec)};
  };
  const auto b = gaps(base), f = gaps(fine);
  const char* names[] = {"galerkin_fd", "galerkin_cylinder", "fd_cylinder"};
  Criterion c{4, "cross-solver-equivalence", {}, 0.0, 30.0, ""};
  for (int i = 0; i < 3; ++i) c.checks.push_back(upper(names[i], b[i], 2e-2 * o.tol_scale));
  for (int i = 0; i < 3; ++i)
    c.checks.push_back(lower(std::string(names[i]) + "_reduction", b[i] / std::max(f[i], 1e-300), 1.3));
  c.seconds = since(t0);
  return c;
}

Criterion c5_moving_balance(Runs& runs) {
  const auto& o = runs.options();
  const auto t0 = Clock::now();
  auto residual = [&](const MovingLevel& lv) {
    const auto l = energy::ledger(energy::ledger_input_1d(runs.family(), lv.fd, SpaceTimeField::zero()), o.exec);
    return max_of(l.residual_moving);
  };
  const double base = residual(runs.moving(false));
  const double fine = residual(runs.moving(true));
  Criterion c{5, "moving-energy-balance", {}, 0.0, 0.0, "grid solver, n=400 and n=800"};
  c.checks.push_back(upper("residual_moving", base, 5e-3 * o.tol_scale));
  c.checks.push_back(range("refinement_ratio", base / std::max(fine, 1e-300), 1.3, 3.0));
  c.seconds = since(t0);
  return c;
}

Criterion c6_fixed_balance(Runs& runs) {
  const auto& o = runs.options();
  const auto t0 = Clock::now();
  const transform::CoefficientField1D coeffs(runs.family(), SpaceTimeField::zero());
  const auto r = energy::balance_residual_fixed(runs.moving(false).galerkin, coeffs, o.exec);
  Criterion c{6, "fixed-domain-balance", {}, 0.0, 0.0, std::to_string(r.size()) + " stored times"};
  c.checks.push_back(upper("residual_fixed", max_of(r), 1e-3 * o.tol_scale));
  c.seconds = since(t0);
  return c;
}

Criterion c7_energy_inequality(Runs& runs) {
  const auto& o = runs.options();
  const auto t0 = Clock::now();
  double excess = -std::numeric_limits<double>::infinity();
  for (bool refined : {false, true}) {
    const auto& cy = runs.moving(refined).cylinder;
    for (std::size_t k = 0; k < cy.energy_before.size(); ++k) {
      const double bound = cy.initial_energy + cy.work[k];
      excess = std::max(excess, (cy.energy_before[k] - bound) / std::abs(bound));
    }
  }
  Criterion c{7, "energy-inequality", {}, 0.0, 0.0, "cylinder scheme, 32 and 64 partitions"};
  c.checks.push_back(upper("max_relative_excess", excess, 1e-8 * o.tol_scale));
  c.seconds = since(t0);
  return c;
}

Criterion c8_griffith(const Options& o) {
  const auto t0 = Clock::now();
  const auto r = griffith::equivalence_sweep(1000, 10000, o.seed, o.exec);
  Criterion c{8, "griffith-equivalence", {}, 0.0, 5.0, std::to_string(r.pairs) + " pairs, seed " + std::to_string(o.seed)};
  c.checks.push_back(upper("a_vs_b", r.max_a_vs_b, 2e-4 * o.tol_scale));
  c.checks.push_back(upper("a_vs_mdp", r.max_a_vs_mdp, 2e-4 * o.tol_scale));
  c.checks.push_back(upper("b_vs_mdp", r.max_b_vs_mdp, 2e-4 * o.tol_scale));
  c.seconds = since(t0);
  return c;
}

Criterion c9_coupled_oracle(Runs& runs) {
  const auto& o = runs.options();
  const auto t0 = Clock::now();
  const double exact = std::numbers::sqrt2 / 2.0;
  const auto sc = Runs::constant_scenario();
  const auto ode = characteristics::front_ode_exact(sc, 1e-3);
  double ode_err = 0.0;
  for (double s : ode.speed) ode_err = std::max(ode_err, std::abs(s - exact));
  double seconds = 0.0;
  const auto& r = runs.coupled_1d(false, &seconds);
  double solver_err = 0.0;
  for (const auto& f : r.front) solver_err = std::max(solver_err, std::abs(f.speed - exact));
  Criterion c{9, "coupled-1d-oracle", {}, 0.0, 30.0, "horizon " + fmt(sc.horizon)};
  c.checks.push_back(upper("ode_speed_error", ode_err, 1e-8 * o.tol_scale));
  c.checks.push_back(upper("solver_speed_error", solver_err, 1e-3 * o.tol_scale));
  // T* itself lies beyond the run horizon; integrate the free problem up to it.
  auto open = sc;
  open.horizon = 10.0;
  const double t_star = characteristics::front_ode_exact(open, 1e-3).t_star;
  c.checks.push_back(upper("t_star_error", std::abs(t_star - 1.0 / (1.0 - exact)), 1e-8 * o.tol_scale));
  c.seconds = since(t0);
  return c;
}

Criterion c10_coupled_balance(Runs& runs) {
  const auto& o = runs.options();
  const auto t0 = Clock::now();
  const double base = max_of(runs.coupled_1d(false).balance_residual);
  const double fine = max_of(runs.coupled_1d(true).balance_residual);
  Criterion c{10, "coupled-energy-balance", {}, 0.0, 0.0, "refined: n=800, dt=5e-4"};
  c.checks.push_back(upper("balance_residual", base, 1e-2 * o.tol_scale));
  c.checks.push_back(lower("refinement_ratio", base / std::max(fine, 1e-300), 1.0));
  c.seconds = since(t0);
  return c;
}

Criterion c11_radial(const Options& o) {
  const auto t0 = Clock::now();
  coupled::RadialScenario rs;
  rs.outer_radius = 2.0;
  rs.rho0 = 0.5;
  rs.u0 = Expr::product(Expr::smoothstep(0.0, 0.1), Expr::affine(1.0, -2.0));
  rs.u1 = Expr::product(Expr::smoothstep(0.0, 0.1), Expr::constant(std::numbers::sqrt2));
  rs.kappa = Expr::constant(1.0);
  rs.horizon = 0.6;
  coupled::CoupledOptions opt;
  opt.griffith_tol = 1e-3 * o.tol_scale;
  opt.exec = o.exec;
  const auto r = coupled::evolve_coupled_radial(rs, opt);
  double decrease = 0.0, min_speed = 1.0, max_speed = 0.0;
  for (std::size_t k = 0; k < r.front.size(); ++k) {
    if (k) decrease = std::max(decrease, r.front[k - 1].position - r.front[k].position);
    min_speed = std::min(min_speed, r.front[k].speed);
    max_speed = std::max(max_speed, r.front[k].speed);
  }
  Criterion c{11, "radial-sanity", {}, 0.0, 60.0, "rho: " + fmt(rs.rho0) + " -> " + fmt(r.front.back().position)};
  c.checks.push_back(upper("max_rho_decrease", decrease, 0.0));
  c.checks.push_back(lower("min_speed", min_speed, 0.0));
  c.checks.push_back(upper("max_speed", max_speed, 1.0 - 1e-12));
  c.checks.push_back(lower("griffith_report", r.griffith.pass ? 1.0 : 0.0, 1.0));
  c.seconds = since(t0);
  return c;
}

Criterion c12_measure(const Options& o) {
  const auto t0 = Clock::now();
  double gap = 0.0;
  for (const auto& nf : builtin_families())
    for (double frac : {0.25, 0.5, 1.0}) {
      const double t = nf.family.horizon() * frac;
      gap = std::max(gap, std::abs(nf.family.geometric_measure(t) - energy::flux_measure(nf.family, t, 16, 64)));
    }
  Criterion c{12, "measure-identity", {}, 0.0, 0.0, ""};
  c.checks.push_back(upper("max_measure_gap", gap, 1e-6 * o.tol_scale));
  c.seconds = since(t0);
  return c;
}

std::vector<Criterion> run_ids(const std::vector<int>& ids, const Options& o) {
  Runs runs(o);
  std::vector<Criterion> out;
  for (int id : ids) {
    switch (id) {
      case 1: out.push_back(c1_identities(o)); break;
      case 2: out.push_back(c2_omega(o)); break;
      case 3: out.push_back(c3_ellipticity(o)); break;
      case 4: out.push_back(c4_equivalence(runs)); break;
      case 5: out.push_back(c5_moving_balance(runs)); break;
      case 6: out.push_back(c6_fixed_balance(runs)); break;
      case 7: out.push_back(c7_energy_inequality(runs)); break;
      case 8: out.push_back(c8_griffith(o)); break;
      case 9: out.push_back(c9_coupled_oracle(runs)); break;
      case 10: out.push_back(c10_coupled_balance(runs)); break;
      case 11: out.push_back(c11_radial(o)); break;
      case 12: out.push_back(c12_measure(o)); break;
      default: break;
    }
  }
  return out;
}

const std::map<std::string, std::vector<int>>& suites() {
  static const std::map<std::string, std::vector<int>> s = {
      {"identities", {1, 2, 3, 12}}, {"transform-equivalence", {4}}, {"energy", {5, 6, 7}},
      {"griffith", {8}},             {"coupled-1d", {9, 10}},        {"coupled-radial", {11}}};
  return s;
}

}  // namespace

bool Check::pass() const {
  switch (kind) {
    case Kind::Upper: return measured <= limit;
    case Kind::Lower: return measured >= limit;
    case Kind::Range: return measured >= limit && measured <= upper;
  }
  return false;
}

bool Criterion::pass() const {
  if (runtime_limit > 0.0 && seconds >= runtime_limit) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

std::string format_line(const Criterion& c) {
  std::string line = "C" + std::to_string(c.id) + (c.pass() ? " PASS " : " FAIL ") + c.name;
  for (const auto& ch : c.checks) {
    line += " " + ch.label + "=" + fmt(ch.measured);
    switch (ch.kind) {
      case Check::Kind::Upper: line += "<=" + fmt(ch.limit); break;
      case Check::Kind::Lower: line += ">=" + fmt(ch.limit); break;
      case Check::Kind::Range: line += " in [" + fmt(ch.limit) + "," + fmt(ch.upper) + "]"; break;
    }
  }
  char buf[64];
  if (c.runtime_limit > 0.0)
    std::snprintf(buf, sizeof buf, " runtime=%.2fs<%.0fs", c.seconds, c.runtime_limit);
  else
    std::snprintf(buf, sizeof buf, " runtime=%.2fs", c.seconds);
  line += buf;
  if (!c.note.empty()) line += " (" + c.note + ")";
  return line;
}

std::vector<NamedFamily> builtin_families() {
  using namespace geometry;
  return {
      {"identity-interval", identity_family(ReferenceDomain::interval(1.0), 1.0), false},
      {"identity-annulus", identity_family(ReferenceDomain::annulus(0.5, 1.0), 1.0), false},
      {"scaling", scaling_family(Expr::affine(1.0, 0.5), 1.0), false},
      {"homothetic-ball", homothetic_family(ReferenceDomain::ball(1.0, 2), Expr::poly({1.0, 0.3, 0.1}), 1.0), false},
      {"homothetic-tetrahedron",
       homothetic_family(ReferenceDomain::tetrahedron(vec3(1.0, 2.0, 2.0) / 3.0, 1.0), Expr::affine(1.0, 0.3), 1.0), false},
      {"homothetic-box", homothetic_family(ReferenceDomain::box({1.0, 0.5}), Expr::affine(1.0, 0.3), 1.0), false},
      {"sublevel-annulus", sublevel_family(LevelFunction::norm(2), 1.0, Expr::affine(0.2, 0.1), 1.0), true},
      {"sublevel-ellipse", sublevel_family(LevelFunction::elliptic_norm(1.0, 2.0), 1.0, Expr::poly({0.2, 0.1, 0.05}), 1.0), true},
      {"sublevel-interval", sublevel_family(LevelFunction::affine_1d(2.0, -1.0), 2.0, Expr::affine(1.0, 0.5), 1.0), true},
  };
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : suites()) names.push_back(k);
  return names;
}

std::vector<Criterion> run_suite(const std::string& name, const Options& options) {
  const auto it = suites().find(name);
  if (it == suites().end()) throw Error(Errc::UnknownSuite, "unknown suite '" + name + "'");
  return run_ids(it->second, options);
}

std::vector<Criterion> run_all(const Options& options) {
  return run_ids({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, options);
}

std::vector<Criterion> verify_scenario(const std::filesystem::path& file, const std::filesystem::path& out,
                                       const Options& options) {
  const auto t0 = Clock::now();
  const Scenario sc = parse_scenario(file);
  const auto art = runner::run(sc, out.empty() ? std::filesystem::path(sc.outputs.directory) : out, options.exec);
  std::map<std::string, double> s(art.summary.begin(), art.summary.end());
  Criterion c{0, "scenario:" + sc.name, {}, 0.0, 0.0, ""};
  const double k = options.tol_scale;
  auto has = [&](const char* key) { return s.count(key) > 0; };
  if (has("regularity_pass")) c.checks.push_back(lower("regularity", s["regularity_pass"], 1.0));
  if (has("max_residual_fixed") && sc.numerics.solver != WaveSolver::Cylinder)
    c.checks.push_back(upper("residual_fixed", s["max_residual_fixed"], 1e-3 * k));
  if (has("max_residual_moving")) c.checks.push_back(upper("residual_moving", s["max_residual_moving"], 5e-3 * k));
  if (has("max_relative_energy_excess"))
    c.checks.push_back(upper("relative_energy_excess", s["max_relative_energy_excess"], 1e-8 * k));
  if (has("max_measure_gap")) c.checks.push_back(upper("measure_gap", s["max_measure_gap"], 1e-6 * k));
  if (has("griffith_pass")) c.checks.push_back(lower("griffith_report", s["griffith_pass"], 1.0));
  if (has("max_balance_residual")) c.checks.push_back(upper("balance_residual", s["max_balance_residual"], 1e-2 * k));
  if (has("max_speed_error_vs_exact"))
    c.checks.push_back(upper("speed_error_vs_exact", s["max_speed_error_vs_exact"], 1e-3 * k));
  c.seconds = since(t0);
  return {c};
}

}  // namespace movwave::verify
