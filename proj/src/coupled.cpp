#include "movwave/coupled.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "movwave/error.hpp"
#include "movwave/hyperbolic.hpp"
#include "movwave/transform.hpp"

namespace movwave::coupled {

namespace {

struct LoopConfig {
  double start = 1.0;
  Expr u0, u1, kappa;
  SpaceTimeField f;
  double horizon = 1.0;
  bool radial = false;
  double outer_radius = 0.0;
};

constexpr double kSonicSlack = 1e-12;

CoupledResult run_loop(const LoopConfig& cfg, const CoupledOptions& opt) {
  const int N = opt.cells;
  if (N < 8) throw Error(Errc::InvalidArgument, "coupled grid needs at least 8 cells");
  if (!(opt.dt > 0.0) || !(cfg.horizon > 0.0)) throw Error(Errc::InvalidArgument, "dt and horizon must be positive");
  const int steps = std::max(1, static_cast<int>(std::ceil(cfg.horizon / opt.dt - 1e-9)));
  const double dt = cfg.horizon / steps;

  std::function<double(double, double)> drift;
  if (cfg.radial) drift = [R = cfg.outer_radius](double, double r) { return 1.0 / (R - r); };

  double pos = cfg.start, t = 0.0;
  VecX v(N + 1), ut(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double x = pos * i / N;
    v(i) = cfg.u0(x);
    ut(i) = cfg.u1(x);
  }
  v(0) = v(N) = 0.0;
  ut(0) = 0.0;

  CoupledResult out;
  Trajectory& traj = out.solution;
  traj.representation = Trajectory::Representation::Grid;
  traj.frame = Trajectory::Frame::Physical;

  energy::LedgerInput ledger_in;
  ledger_in.f = cfg.f;
  ledger_in.kappa = cfg.kappa;
  ledger_in.geometry = cfg.radial ? energy::Geometry::Radial : energy::Geometry::Planar;
  ledger_in.outer_radius = cfg.outer_radius;
  auto surface = [&](double r) { return cfg.radial ? 2.0 * std::numbers::pi * (cfg.outer_radius - r) : 1.0; };

  for (int n = 0;; ++n) {
    const double h = pos / N;
    const VecX ux = nodal_gradient(v, h);
    const double p = (3.0 * v(N) - 4.0 * v(N - 1) + v(N - 2)) / (2.0 * h);
    const double p_fixed = (3.0 * v(0) - 4.0 * v(1) + v(2)) / (2.0 * h);
    const double u_dot = 3.0 * ut(N - 1) - 3.0 * ut(N - 2) + ut(N - 3);
    const double kappa = cfg.kappa(pos);
    const double omega = opt.velocity_form ? griffith::flow_rule_b(p, u_dot, kappa) : griffith::flow_rule_a(p, kappa);
    if (!(omega < 1.0 - kSonicSlack))
      throw Error(Errc::SupersonicStep, "flow rule returned " + std::to_string(omega) + " at t=" + std::to_string(t));
    out.front.push_back({t, pos, omega, p, u_dot, kappa});

    energy::Slice slice;
    slice.t = t;
    for (int i = 0; i <= N; ++i) slice.x.push_back(pos * i / N);
    slice.u.assign(v.data(), v.data() + v.size());
    slice.u_t.assign(ut.data(), ut.data() + ut.size());
    slice.u_x.assign(ux.data(), ux.data() + ux.size());
    ledger_in.slices.push_back(std::move(slice));
    ledger_in.traces.push_back({t, {{0.0, 0.0, p_fixed, surface(0.0)}, {pos, omega, p, surface(pos)}}});
    ledger_in.front.push_back(pos);

    if (n % static_cast<int>(std::max<std::size_t>(opt.store_stride, 1)) == 0 || n == steps) {
      traj.times.push_back(t);
      traj.values.push_back(v);
      traj.velocities.push_back(ut);
      traj.extents.emplace_back(0.0, pos);
    }
    if (n == steps) break;

    const double next = pos + omega * dt;
    if (cfg.radial && next >= cfg.outer_radius * (1.0 - 1e-3))
      throw Error(Errc::HorizonReached, "inner circle collapses at t=" + std::to_string(t));

    // Reference velocity of the step family: u_t + u_x Phi_t with Phi_t = omega x / pos.
    VecX w(N + 1);
    for (int i = 0; i <= N; ++i) w(i) = ut(i) + ux(i) * omega * (pos * i / N) / pos;
    w(0) = w(N) = 0.0;
    transform::CoefficientField1D coeffs(geometry::scaling_family(Expr::affine(pos, omega), dt), cfg.f, drift);
    coeffs.set_time_offset(t);
    const hyperbolic::FdOperator op(coeffs, N, opt.exec);
    if (dt > op.stable_dt(0.0)) throw Error(Errc::CflViolation, "coupled step violates the CFL bound");
    op.step(0.0, dt, v, w);
    if (!v.allFinite() || v.cwiseAbs().maxCoeff() > 1e12) throw Error(Errc::BlowUp, "coupled state blew up");

    pos = next;
    t = (n + 1 == steps) ? cfg.horizon : t + dt;
    const VecX ux_new = nodal_gradient(v, pos / N);
    for (int i = 0; i <= N; ++i) ut(i) = w(i) - ux_new(i) * omega * (pos * i / N) / pos;
    ut(0) = 0.0;
    ut(N) = w(N) - ux_new(N) * omega;
  }

  out.ledger = energy::ledger(ledger_in, opt.exec);
  out.balance_residual = energy::coupled_balance_residual(out.ledger);

  std::vector<griffith::FrontObservation> obs;
  for (std::size_t k = 1; k + 1 < out.front.size(); ++k) {
    const auto& f = out.front[k];
    const double speed = (out.front[k + 1].position - out.front[k - 1].position) /
                         (out.front[k + 1].t - out.front[k - 1].t);
    obs.push_back({f.t, f.position, speed, f.p, f.kappa});
    const double d2 = (out.front[k + 1].position - 2.0 * f.position + out.front[k - 1].position) / (dt * dt);
    out.max_second_difference = std::max(out.max_second_difference, std::abs(d2));
  }
  out.griffith = griffith::griffith_check(obs, opt.griffith_tol);
  return out;
}

}  // namespace

CoupledResult evolve_coupled_1d(const characteristics::CharScenario& sc, const CoupledOptions& options) {
  if (characteristics::scenario_compatibility(sc) == griffith::Compatibility::Incompatible)
    throw Error(Errc::CompatibilityViolated, "front data at l0 violate the compatibility conditions");
  LoopConfig cfg;
  cfg.start = sc.l0;
  cfg.u0 = sc.u0;
  cfg.u1 = sc.u1;
  cfg.kappa = sc.kappa;
  cfg.f = sc.f;
  cfg.horizon = sc.horizon;
  return run_loop(cfg, options);
}

CoupledResult evolve_coupled_radial(const RadialScenario& sc, const CoupledOptions& options) {
  if (!(sc.rho0 > 0.0) || !(sc.rho0 < sc.outer_radius))
    throw Error(Errc::InvalidArgument, "need 0 < rho0 < R");
  if (std::abs(sc.u0(sc.rho0)) > 1e-9 ||
      griffith::compatibility_check(sc.u0.eval(sc.rho0, 1), sc.u1(sc.rho0), sc.kappa(sc.rho0)) ==
          griffith::Compatibility::Incompatible)
    throw Error(Errc::CompatibilityViolated, "front data on the inner circle violate the compatibility conditions");
  LoopConfig cfg;
  cfg.start = sc.rho0;
  cfg.u0 = sc.u0;
  cfg.u1 = sc.u1;
  cfg.kappa = sc.kappa;
  cfg.horizon = sc.horizon;
  cfg.radial = true;
  cfg.outer_radius = sc.outer_radius;
  return run_loop(cfg, options);
}

}  // namespace movwave::coupled
