#include "sublevel.hpp"

#include <array>
#include <cmath>

#include "movwave/error.hpp"

namespace movwave::geometry {

namespace {

// Nested differences of integrated quantities need a noise-robust stencil:
// fourth order with moderate steps keeps truncation and round-off near 1e-12.
constexpr double kSpaceStep = 1e-3;
constexpr double kTimeStep = 1e-3;

template <class Fn>
auto diff4(Fn&& fn, double h) {
  return (8.0 * (fn(h) - fn(-h)) - (fn(2.0 * h) - fn(-2.0 * h))) / (12.0 * h);
}

}  // namespace

SublevelFlow::SublevelFlow(LevelFunction g, double outer_level, Expr rho, int steps)
    : g_(std::move(g)), r_(outer_level), rho_(std::move(rho)), steps_(steps) {}

void SublevelFlow::check(const Vec& x, double grad_sq) const {
  if (!x.allFinite() || !(grad_sq > 1e-24))
    throw Error(Errc::FlowEscape, "sublevel flow left the region where grad g is defined");
}

Vec SublevelFlow::field(double t, const Vec& x) const {
  const Vec grad = g_.gradient(x);
  const double gs = grad.squaredNorm();
  check(x, gs);
  const double c = rho_.eval(t, 1) / rho_(t);
  return c * (g_.value(x) - r_) / gs * grad;
}

Mat SublevelFlow::field_jacobian(double t, const Vec& x) const {
  const Vec grad = g_.gradient(x);
  const Mat hess = g_.hessian(x);
  const double gs = grad.squaredNorm();
  check(x, gs);
  const double c = rho_.eval(t, 1) / rho_(t);
  const double excess = g_.value(x) - r_;
  const Vec hg = hess * grad;
  Mat d = grad * grad.transpose() / gs + excess * (hess / gs - 2.0 * grad * hg.transpose() / (gs * gs));
  return c * d;
}

Vec SublevelFlow::field_dt(double t, const Vec& x) const {
  const Vec grad = g_.gradient(x);
  const double gs = grad.squaredNorm();
  check(x, gs);
  const double r = rho_(t), rd = rho_.eval(t, 1), rdd = rho_.eval(t, 2);
  const double c = rdd / r - rd * rd / (r * r);
  return c * (g_.value(x) - r_) / gs * grad;
}

SublevelFlow::State SublevelFlow::flow(double t0, double t1, const Vec& x0, bool variational) const {
  const int n = x0.size();
  State s{x0, Mat::Identity(n, n)};
  if (t0 == t1) return s;
  const double h = (t1 - t0) / steps_;
  for (int i = 0; i < steps_; ++i) {
    const double t = t0 + i * h;
    const Vec k1 = field(t, s.x);
    const Vec x2 = s.x + 0.5 * h * k1;
    const Vec k2 = field(t + 0.5 * h, x2);
    const Vec x3 = s.x + 0.5 * h * k2;
    const Vec k3 = field(t + 0.5 * h, x3);
    const Vec x4 = s.x + h * k3;
    const Vec k4 = field(t + h, x4);
    if (variational) {
      const Mat m1 = field_jacobian(t, s.x) * s.m;
      const Mat m2 = field_jacobian(t + 0.5 * h, x2) * (s.m + 0.5 * h * m1);
      const Mat m3 = field_jacobian(t + 0.5 * h, x3) * (s.m + 0.5 * h * m2);
      const Mat m4 = field_jacobian(t + h, x4) * (s.m + h * m3);
      s.m += h / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    }
    s.x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  check(s.x, g_.gradient(s.x).squaredNorm());
  return s;
}

double SublevelFlow::det_forward(double t, const Vec& y) const { return flow(0.0, t, y, true).m.determinant(); }

double SublevelFlow::det_backward(double t, const Vec& x) const { return flow(t, 0.0, x, true).m.determinant(); }

InverseJet SublevelFlow::inverse(double t, const Vec& x) const {
  const State back = flow(t, 0.0, x, true);
  const Vec psi_t = diff4([&](double d) -> Vec { return flow(t + d, 0.0, x, false).x; }, kTimeStep);
  return {back.x, back.m, psi_t};
}

MotionJet SublevelFlow::jet_first_order(double t, const Vec& y) const {
  MotionJet j;
  const State fwd = flow(0.0, t, y, true);
  j.phi = fwd.x;
  j.dphi = fwd.m;
  j.det_dphi = fwd.m.determinant();
  j.phi_t = field(t, fwd.x);
  j.psi_t = diff4([&](double d) -> Vec { return flow(t + d, 0.0, j.phi, false).x; }, kTimeStep);
  return j;
}

MotionJet SublevelFlow::jet(double t, const Vec& y) const {
  const int n = y.size();
  MotionJet j;
  const State fwd = flow(0.0, t, y, true);
  j.phi = fwd.x;
  j.dphi = fwd.m;
  j.det_dphi = fwd.m.determinant();
  const Mat dx = field_jacobian(t, fwd.x);
  j.phi_t = field(t, fwd.x);
  j.phi_tt = field_dt(t, fwd.x) + dx * j.phi_t;
  j.dphi_t = dx * fwd.m;
  j.det_dphi_t = j.det_dphi * dx.trace();

  j.grad_det_dphi = Vec::Zero(n);
  j.grad_det_dpsi = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    j.grad_det_dphi(i) = diff4([&](double d) { return det_forward(t, y + d * e); }, kSpaceStep);
    j.grad_det_dpsi(i) = diff4([&](double d) { return det_backward(t, j.phi + d * e); }, kSpaceStep);
  }

  const State back = flow(t, 0.0, j.phi, true);
  j.dpsi = back.m;
  j.det_dpsi = back.m.determinant();
  std::array<State, 4> shifted;
  const double offsets[4] = {-2.0, -1.0, 1.0, 2.0};
  for (int k = 0; k < 4; ++k) shifted[k] = flow(t + offsets[k] * kTimeStep, 0.0, j.phi, true);
  auto stencil = [](double fm2, double fm1, double fp1, double fp2) {
    return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * kTimeStep);
  };
  j.psi_t = Vec(n);
  for (int i = 0; i < n; ++i)
    j.psi_t(i) = stencil(shifted[0].x(i), shifted[1].x(i), shifted[2].x(i), shifted[3].x(i));
  j.det_dpsi_t = stencil(shifted[0].m.determinant(), shifted[1].m.determinant(), shifted[2].m.determinant(),
                         shifted[3].m.determinant());
  return j;
}

}  // namespace movwave::geometry
