#include "movwave/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

#include "movwave/error.hpp"
#include "movwave/quadrature.hpp"
#include "movwave/transform.hpp"

namespace movwave::characteristics {

namespace {

constexpr double kSimpsonTol = 1e-9;

// Odd 2L-periodic extension of a function given on [0, L].
double odd_extension(const std::function<double(double)>& fn, double L, double y) {
  double r = std::fmod(y + L, 2.0 * L);
  if (r < 0.0) r += 2.0 * L;
  r -= L;
  return r < 0.0 ? -fn(-r) : fn(r);
}

// Integral over [a, b] split at the multiples of L where the extension kinks.
double integrate_extended(const std::function<double(double)>& fn, double L, double a, double b, double tol) {
  if (b <= a) return 0.0;
  double total = 0.0, left = a;
  for (double k = std::floor(a / L) + 1.0; k * L < b; k += 1.0) {
    total += adaptive_simpson([&](double y) { return odd_extension(fn, L, y); }, left, k * L, tol);
    left = k * L;
  }
  return total + adaptive_simpson([&](double y) { return odd_extension(fn, L, y); }, left, b, tol);
}

}  // namespace

griffith::Compatibility scenario_compatibility(const CharScenario& sc, double tol) {
  if (std::abs(sc.u0(sc.l0)) > tol) return griffith::Compatibility::Incompatible;
  return griffith::compatibility_check(sc.u0.eval(sc.l0, 1), sc.u1(sc.l0), sc.kappa(sc.l0), tol);
}

double dalembert_fixed(double L, const Expr& u0, const Expr& u1, const SpaceTimeField& f, double t, double x) {
  if (!(L > 0.0)) throw Error(Errc::InvalidArgument, "interval length must be positive");
  if (x < 0.0 || x > L) throw Error(Errc::InvalidArgument, "evaluation point outside [0, L]");
  const auto U0 = [&](double y) { return u0(y); };
  const auto U1 = [&](double y) { return u1(y); };
  double u = 0.5 * (odd_extension(U0, L, x + t) + odd_extension(U0, L, x - t));
  if (!u1.is_zero()) u += 0.5 * integrate_extended(U1, L, x - t, x + t, kSimpsonTol);
  if (!f.is_zero() && t > 0.0) {
    const auto cone = [&](double s) {
      const auto fs = [&](double y) { return f(s, y); };
      return integrate_extended(fs, L, x - (t - s), x + (t - s), 0.1 * kSimpsonTol);
    };
    u += 0.5 * adaptive_simpson(cone, 0.0, t, kSimpsonTol);
  }
  return u;
}

double characteristic_invariant(const CharScenario& sc, double t, double l) {
  const double foot = std::max(l - t, 0.0);
  double F = sc.u0.eval(foot, 1) - sc.u1(foot);
  if (!sc.f.is_zero() && t > 0.0)
    F -= adaptive_simpson([&](double s) { return sc.f(s, s - t + l); }, 0.0, t, kSimpsonTol);
  return F;
}

FrontHistory front_ode_exact(const CharScenario& sc, double dt, bool frozen) {
  if (!(dt > 0.0) || !(sc.horizon > 0.0)) throw Error(Errc::InvalidArgument, "dt and horizon must be positive");
  if (scenario_compatibility(sc) == griffith::Compatibility::Incompatible)
    throw Error(Errc::CompatibilityViolated, "front data at l0 violate the compatibility conditions");
  auto rate = [&](double t, double l) {
    if (frozen) return 0.0;
    const double F = characteristic_invariant(sc, t, l);
    const double k = sc.kappa(l);
    if (!(k > 0.0)) throw Error(Errc::NonPositiveToughness, "toughness must be positive at the front");
    return std::max((F * F - 2.0 * k) / (F * F + 2.0 * k), 0.0);
  };

  FrontHistory h;
  const int steps = std::max(1, static_cast<int>(std::ceil(sc.horizon / dt - 1e-9)));
  const double step = sc.horizon / steps;
  double t = 0.0, l = sc.l0;
  h.times.push_back(t);
  h.length.push_back(l);
  h.speed.push_back(rate(t, l));
  for (int n = 0; n < steps; ++n) {
    const double k1 = rate(t, l);
    const double k2 = rate(t + 0.5 * step, l + 0.5 * step * k1);
    const double k3 = rate(t + 0.5 * step, l + 0.5 * step * k2);
    const double k4 = rate(t + step, l + step * k3);
    const double tn = (n + 1 == steps) ? sc.horizon : t + step;
    const double ln = l + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (ln - tn <= 0.0) {
      // Linear interpolation of l - t inside the step.
      const double g0 = l - t, g1 = ln - tn;
      const double w = g0 / (g0 - g1);
      t += w * (tn - t);
      l += w * (ln - l);
      h.times.push_back(t);
      h.length.push_back(l);
      h.speed.push_back(rate(t, l));
      h.t_star = t;
      h.reached_characteristic_limit = true;
      return h;
    }
    t = tn;
    l = ln;
    h.times.push_back(t);
    h.length.push_back(l);
    h.speed.push_back(rate(t, l));
  }
  h.t_star = sc.horizon;
  return h;
}

FrontTrace front_trace(std::span<const double> u, std::span<const double> u_t, double h) {
  if (u.size() < 4 || u_t.size() < 4)
    throw Error(Errc::TooFewSamples, "front trace needs four samples, got " + std::to_string(std::min(u.size(), u_t.size())));
  if (!(h > 0.0)) throw Error(Errc::InvalidArgument, "trace spacing must be positive");
  FrontTrace tr;
  tr.normal_derivative = (3.0 * u[0] - 4.0 * u[1] + u[2]) / (2.0 * h);
  tr.velocity = 3.0 * u_t[1] - 3.0 * u_t[2] + u_t[3];
  return tr;
}

FrontTrace front_trace(const Trajectory& traj, const geometry::MotionFamily& fam, double t, double h) {
  if (fam.dim() != 1) throw Error(Errc::InvalidArgument, "front trace is one-dimensional");
  double xa, xb;
  if (traj.frame == Trajectory::Frame::Physical && !traj.extents.empty()) {
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t - 1e-14);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - traj.times.begin()), traj.size() - 1);
    std::tie(xa, xb) = traj.extent(k);
  } else {
    const transform::CoefficientField1D span(fam, SpaceTimeField::zero());
    xa = fam.map(t, vec1(span.lo()))(0);
    xb = fam.map(t, vec1(span.hi()))(0);
  }
  if (h <= 0.0) {
    const double cells = traj.representation == Trajectory::Representation::Grid
                             ? static_cast<double>(traj.values.front().size() - 1)
                             : 1000.0;
    h = (xb - xa) / cells;
  }
  std::array<double, 4> u{}, ut{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto pv = transform::pushforward(fam, traj, t, vec1(xb - static_cast<double>(i) * h));
    if (pv.outside && i > 0) throw Error(Errc::TooFewSamples, "trace stencil leaves the domain");
    u[i] = pv.u;
    ut[i] = pv.u_t;
  }
  return front_trace(u, ut, h);
}

}  // namespace movwave::characteristics
