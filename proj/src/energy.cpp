#include "movwave/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "movwave/characteristics.hpp"
#include "movwave/error.hpp"
#include "movwave/quadrature.hpp"

namespace movwave::energy {

namespace {

double radial_weight(const LedgerInput& in, double r) {
  return in.geometry == Geometry::Radial ? 2.0 * std::numbers::pi * (in.outer_radius - r) : 1.0;
}

struct SliceTotals {
  double kinetic = 0.0, potential = 0.0, work_rate = 0.0;
};

SliceTotals slice_totals(const LedgerInput& in, const Slice& s) {
  SliceTotals out;
  const std::size_t n = s.x.size();
  if (n < 2) return out;
  const bool forced = !in.f.is_zero();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dx = s.x[i + 1] - s.x[i];
    const double w0 = radial_weight(in, s.x[i]), w1 = radial_weight(in, s.x[i + 1]);
    out.kinetic += 0.25 * dx * (w0 * s.u_t[i] * s.u_t[i] + w1 * s.u_t[i + 1] * s.u_t[i + 1]);
    if (!s.u_x.empty()) {
      out.potential += 0.25 * dx * (w0 * s.u_x[i] * s.u_x[i] + w1 * s.u_x[i + 1] * s.u_x[i + 1]);
    } else {
      const double g = (s.u[i + 1] - s.u[i]) / dx;
      out.potential += 0.25 * dx * (w0 + w1) * g * g;
    }
    if (forced)
      out.work_rate += 0.5 * dx *
                       (w0 * in.f(s.t, s.x[i]) * s.u_t[i] + w1 * in.f(s.t, s.x[i + 1]) * s.u_t[i + 1]);
  }
  return out;
}

void cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& rate, std::vector<double>& out) {
  out.assign(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (rate[k] + rate[k - 1]);
}

}  // namespace

EnergyLedger ledger(const LedgerInput& in, Exec exec) {
  const std::size_t K = in.slices.size();
  if (!in.traces.empty() && in.traces.size() != K)
    throw Error(Errc::InvalidArgument, "boundary traces and slices must share the time grid");
  if (!in.front.empty() && in.front.size() != K)
    throw Error(Errc::InvalidArgument, "front parameters and slices must share the time grid");
  EnergyLedger l;
  l.t.resize(K);
  l.kinetic.resize(K);
  l.potential.resize(K);
  l.G_total.resize(K);
  std::vector<double> work_rate(K), dissipation_rate(K, 0.0), debond_rate(K, 0.0);
  for_each_index(exec, K, [&](std::size_t k) {
    const SliceTotals s = slice_totals(in, in.slices[k]);
    l.t[k] = in.slices[k].t;
    l.kinetic[k] = s.kinetic;
    l.potential[k] = s.potential;
    work_rate[k] = s.work_rate;
    if (in.traces.empty()) return;
    for (const TracePoint& p : in.traces[k].points) {
      dissipation_rate[k] += p.weight * 0.5 * p.omega * (1.0 - p.omega * p.omega) * p.p * p.p;
      if (in.kappa) debond_rate[k] += p.weight * p.omega * (*in.kappa)(p.x);
    }
    l.G_total[k] = total_release_rate(in.traces[k]);
  });
  cumulative_trapezoid(l.t, work_rate, l.work);
  cumulative_trapezoid(l.t, dissipation_rate, l.boundary_dissipation);
  cumulative_trapezoid(l.t, debond_rate, l.debond_dissipation);

  l.debond_direct.assign(K, 0.0);
  if (in.kappa && !in.front.empty()) {
    for_each_index(exec, K, [&](std::size_t k) {
      const double a = in.front.front(), b = in.front[k];
      if (b == a) return;
      l.debond_direct[k] = integrate_gauss([&](double s) { return (*in.kappa)(s) * radial_weight(in, s); }, a, b, 8);
    });
  }
  l.residual_moving = balance_residual_moving(l);
  return l;
}

std::vector<double> balance_residual_moving(const EnergyLedger& l) {
  std::vector<double> r(l.t.size(), 0.0);
  if (l.t.empty()) return r;
  const double e0 = l.initial_energy();
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] = std::abs(l.kinetic[k] + l.potential[k] + l.boundary_dissipation[k] - e0 - l.work[k]);
  return r;
}

std::vector<double> coupled_balance_residual(const EnergyLedger& l) {
  std::vector<double> r(l.t.size(), 0.0);
  if (l.t.empty()) return r;
  const double e0 = l.initial_energy();
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] = std::abs(l.kinetic[k] + l.potential[k] - l.work[k] + l.debond_dissipation[k] - e0);
  return r;
}

std::vector<double> balance_residual_fixed(const Trajectory& v, const transform::CoefficientField1D& coeffs, Exec exec) {
  const std::size_t K = v.size();
  std::vector<double> out(K, 0.0);
  if (K == 0) return out;
  const double lo = v.lo, hi = v.lo + v.length;
  const int panels = v.representation == Trajectory::Representation::Modal
                         ? std::max(32, 2 * static_cast<int>(v.values.front().size()))
                         : static_cast<int>(v.values.front().size()) - 1;
  const QuadratureRule rule = composite_gauss(lo, hi, panels, 4);
  const double T = coeffs.horizon();
  const double ht = 1e-5 * std::max(T, 1.0);
  const double dy = 1e-6 * (hi - lo);
  const geometry::MotionFamily& fam = coeffs.family();

  std::vector<double> energy(K), rate(K);
  for_each_index(exec, K, [&](std::size_t k) {
    const double t = v.times[k];
    double e = 0.0, r = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double y = rule.nodes[i], w = rule.weights[i];
      const auto s = v.sample(k, y);
      const transform::Coeff1D c = coeffs(t, y);
      double B_t;
      if (t - ht < 0.0)
        B_t = (-3.0 * c.B + 4.0 * coeffs(t + ht, y).B - coeffs(t + 2.0 * ht, y).B) / (2.0 * ht);
      else if (t + ht > T)
        B_t = (3.0 * c.B - 4.0 * coeffs(t - ht, y).B + coeffs(t - 2.0 * ht, y).B) / (2.0 * ht);
      else
        B_t = (coeffs(t + ht, y).B - coeffs(t - ht, y).B) / (2.0 * ht);
      // b = -psi_t, so div b = -d/dy psi_t.
      const double div_b =
          (fam.jet_first_order(t, vec1(y - dy)).psi_t(0) - fam.jet_first_order(t, vec1(y + dy)).psi_t(0)) / (2.0 * dy);
      e += w * 0.5 * (s.v_t * s.v_t + c.B * s.v_y * s.v_y);
      r += w * (0.5 * B_t * s.v_y * s.v_y - c.a * s.v_y * s.v_t - div_b * s.v_t * s.v_t + c.g * s.v_t);
    }
    energy[k] = e;
    rate[k] = r;
  });
  std::vector<double> remainder;
  cumulative_trapezoid(v.times, rate, remainder);
  for (std::size_t k = 0; k < K; ++k) out[k] = std::abs(energy[k] - energy[0] - remainder[k]);
  return out;
}

double release_rate_density(double p, double alpha, std::optional<double> u_dot) {
  if (alpha >= 1.0) throw Error(Errc::SupersonicSpeed, "speed " + std::to_string(alpha) + " is not subsonic");
  if (alpha < 0.0) throw Error(Errc::InvalidArgument, "speed must be nonnegative");
  const double G = 0.5 * (1.0 - alpha * alpha) * p * p;
  if (u_dot && std::abs(*u_dot + alpha * p) <= 1e-12 * std::max(1.0, std::abs(p))) {
    const double alt = 0.5 * (1.0 - alpha) / (1.0 + alpha) * (p - *u_dot) * (p - *u_dot);
    if (std::abs(alt - G) > 1e-10 * std::max(1.0, G))
      throw Error(Errc::InvalidArgument, "release-rate forms disagree on consistent traces");
  }
  return G;
}

std::optional<double> total_release_rate(const BoundaryTrace& trace) {
  double num = 0.0, den = 0.0;
  for (const TracePoint& p : trace.points) {
    num += p.weight * 0.5 * p.omega * (1.0 - p.omega * p.omega) * p.p * p.p;
    den += p.weight * p.omega;
  }
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

Slice slice_1d(const geometry::MotionFamily& fam, const Trajectory& traj, std::size_t k) {
  Slice s;
  s.t = traj.times[k];
  std::vector<double> ys;
  if (traj.representation == Trajectory::Representation::Grid) {
    ys = traj.nodes(k);
  } else {
    constexpr int kPoints = 1600;
    for (int i = 0; i <= kPoints; ++i) ys.push_back(traj.lo + traj.length * i / kPoints);
  }
  const bool physical = traj.frame == Trajectory::Frame::Physical;
  for (double y : ys) {
    const auto v = traj.sample(k, y);
    if (physical) {
      s.x.push_back(y);
      s.u.push_back(v.v);
      s.u_t.push_back(v.v_t);
      s.u_x.push_back(v.v_y);
      continue;
    }
    const geometry::MotionJet j = fam.jet_first_order(s.t, vec1(y));
    s.x.push_back(j.phi(0));
    s.u.push_back(v.v);
    s.u_t.push_back(v.v_t + v.v_y * j.psi_t(0));
    s.u_x.push_back(v.v_y / j.dphi(0, 0));
  }
  return s;
}

BoundaryTrace trace_1d(const geometry::MotionFamily& fam, const Trajectory& traj, std::size_t k) {
  BoundaryTrace tr;
  tr.t = traj.times[k];
  const bool physical = traj.frame == Trajectory::Frame::Physical;
  const auto [a, b] = traj.extent(k);
  for (int side = 0; side < 2; ++side) {
    const double y = side == 0 ? a : b;
    const double sign = side == 0 ? -1.0 : 1.0;
    double p_ref;
    if (traj.representation == Trajectory::Representation::Grid) {
      const VecX& v = traj.values[k];
      const auto n = v.size() - 1;
      const double h = (b - a) / static_cast<double>(n);
      std::array<double, 4> u{}, zero{};
      for (Eigen::Index i = 0; i < 4; ++i) u[static_cast<std::size_t>(i)] = side == 0 ? v(i) : v(n - i);
      p_ref = characteristics::front_trace(u, zero, h).normal_derivative;
    } else {
      p_ref = sign * traj.sample(k, y).v_y;
    }
    TracePoint pt;
    if (physical) {
      pt.x = y;
      pt.p = p_ref;
      // The physical grid spans the frozen domain; the boundary moves with the family.
      pt.omega = 0.0;
    } else {
      const geometry::MotionJet j = fam.jet_first_order(tr.t, vec1(y));
      pt.x = j.phi(0);
      pt.p = p_ref / j.dphi(0, 0);
      pt.omega = sign * j.phi_t(0);
    }
    tr.points.push_back(pt);
  }
  return tr;
}

LedgerInput ledger_input_1d(const geometry::MotionFamily& fam, const Trajectory& traj, const SpaceTimeField& f,
                            std::optional<Expr> kappa, std::size_t stride) {
  LedgerInput in;
  in.f = f;
  in.kappa = std::move(kappa);
  stride = std::max<std::size_t>(stride, 1);
  std::vector<std::size_t> picks;
  for (std::size_t k = 0; k < traj.size(); k += stride) picks.push_back(k);
  if (picks.back() != traj.size() - 1) picks.push_back(traj.size() - 1);
  in.slices.resize(picks.size());
  in.traces.resize(picks.size());
  in.front.resize(picks.size());
  for_each_index(Exec::Parallel, picks.size(), [&](std::size_t i) {
    in.slices[i] = slice_1d(fam, traj, picks[i]);
    in.traces[i] = trace_1d(fam, traj, picks[i]);
    in.front[i] = in.traces[i].points.back().x;
  });
  return in;
}

double flux_measure(const geometry::MotionFamily& fam, double t, int time_nodes, int boundary_samples) {
  const auto ys = fam.reference().boundary_samples(boundary_samples);
  const double flux = integrate_gauss(
      [&](double s) {
        double acc = 0.0;
        for (const auto& b : geometry::boundary_kinematics(fam, s, ys)) acc += b.omega * b.area_factor * b.weight;
        return acc;
      },
      0.0, t, 1, time_nodes);
  return fam.reference().measure() + flux;
}

}  // namespace movwave::energy
