#include "movwave/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "movwave/error.hpp"

namespace movwave::transform {

using geometry::MotionJet;

CoefficientSample pullback_coefficients(const MotionFamily& fam, const ScalarField& f, double t, const Vec& y,
                                        const DriftField& drift) {
  const double T = fam.horizon();
  const MotionJet j = fam.jet(t, y);
  CoefficientSample s;
  s.t = t;
  s.y = y;
  s.B = j.dpsi * j.dpsi.transpose() - j.psi_t * j.psi_t.transpose();
  s.b = -j.psi_t;
  s.g = f ? f(t, j.phi) : 0.0;

  // d/dt [b detDPhi] by a central difference, one-sided at the ends of [0, T].
  const double h = 1e-5 * T;
  auto flux = [&](double tau) -> Vec {
    const MotionJet k = fam.jet_first_order(tau, y);
    return Vec(-k.psi_t * k.det_dphi);
  };
  Vec dflux;
  if (t - h < 0.0) {
    dflux = (-3.0 * flux(t) + 4.0 * flux(t + h) - flux(t + 2.0 * h)) / (2.0 * h);
  } else if (t + h > T) {
    dflux = (3.0 * flux(t) - 4.0 * flux(t - h) + flux(t - 2.0 * h)) / (2.0 * h);
  } else {
    dflux = (flux(t + h) - flux(t - h)) / (2.0 * h);
  }
  s.a = -(s.B.transpose() * j.grad_det_dphi + dflux) * j.det_dpsi;
  if (drift) s.a += j.dpsi * drift(t, j.phi);
  return s;
}

TransformedData pullback_initial(const MotionFamily& fam, std::function<double(const Vec&)> u0,
                                 std::function<Vec(const Vec&)> grad_u0, std::function<double(const Vec&)> u1) {
  TransformedData d;
  d.v0 = u0;
  d.v1 = [fam, grad_u0 = std::move(grad_u0), u1 = std::move(u1)](const Vec& y) {
    const MotionJet j = fam.jet_first_order(0.0, y);
    return u1(y) + j.phi_t.dot(grad_u0(y));
  };
  return d;
}

double ellipticity_constant(const MotionFamily& fam, geometry::ValidateGrid grid, Exec exec) {
  const std::vector<Vec> ys = fam.reference().interior_samples(grid.points);
  const int nt = std::max(grid.times, 2);
  const std::size_t total = static_cast<std::size_t>(nt) * ys.size();
  std::vector<double> eig(total);
  for_each_index(exec, total, [&](std::size_t k) {
    const double t = fam.horizon() * static_cast<double>(k / ys.size()) / (nt - 1);
    const MotionJet j = fam.jet(t, ys[k % ys.size()]);
    const Mat B = j.dpsi * j.dpsi.transpose() - j.psi_t * j.psi_t.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> solver(B, Eigen::EigenvaluesOnly);
    eig[k] = solver.eigenvalues().minCoeff();
  });
  const double c = *std::min_element(eig.begin(), eig.end());
  if (!(c > 0.0)) throw Error(Errc::NotElliptic, "smallest eigenvalue of B is " + std::to_string(c));
  return c;
}

PushedValue pushforward(const MotionFamily& fam, const Trajectory& v, double t, const Vec& x) {
  PushedValue out;
  out.grad = Vec::Zero(x.size());
  if (v.frame == Trajectory::Frame::Physical) {
    const auto s = v.sample_at(t, x(0));
    out.outside = s.outside;
    if (!s.outside) {
      out.u = s.v;
      out.u_t = s.v_t;
      out.grad(0) = s.v_y;
    }
    return out;
  }
  if (!fam.contains(t, x, 1e-12)) {
    out.outside = true;
    return out;
  }
  const geometry::InverseJet inv = fam.inverse(t, x);
  const auto s = v.sample_at(t, inv.psi(0));
  if (s.outside) {
    out.outside = true;
    return out;
  }
  Vec grad_v = Vec::Zero(x.size());
  grad_v(0) = s.v_y;
  out.u = s.v;
  out.u_t = s.v_t + grad_v.dot(inv.psi_t);
  out.grad = inv.dpsi.transpose() * grad_v;
  return out;
}

LiftedData lift_dirichlet(const SpaceTimeField& W, const Expr& U0, const Expr& U1,
                          const std::vector<double>& fixed_points, const std::function<double(double)>& moving_boundary,
                          double horizon, double tol) {
  for (double x : fixed_points) {
    const double mismatch = U0(x) - W(0.0, x);
    if (std::abs(mismatch) > tol)
      throw Error(Errc::BoundaryMismatch, "U0 differs from W(0, .) at x=" + std::to_string(x));
  }
  if (moving_boundary) {
    constexpr int kSamples = 101;
    for (int i = 0; i < kSamples; ++i) {
      const double t = horizon * i / (kSamples - 1);
      if (std::abs(W(t, moving_boundary(t))) > tol)
        throw Error(Errc::BoundaryMismatch, "W does not vanish on the moving boundary");
    }
  }
  std::vector<SpaceTimeField::Term> fterms;
  Expr w0 = Expr::constant(0.0), w1 = Expr::constant(0.0);
  for (const auto& term : W.terms()) {
    fterms.push_back({term.time, Expr::derivative(term.space, 2)});
    fterms.push_back({Expr::product(Expr::constant(-1.0), Expr::derivative(term.time, 2)), term.space});
    w0 = w0 + Expr::constant(term.time.eval(0.0, 0)) * term.space;
    w1 = w1 + Expr::constant(term.time.eval(0.0, 1)) * term.space;
  }
  LiftedData out;
  out.f = SpaceTimeField(std::move(fterms));
  out.u0 = W.terms().empty() ? U0 : U0 + Expr::constant(-1.0) * w0;
  out.u1 = W.terms().empty() ? U1 : U1 + Expr::constant(-1.0) * w1;
  return out;
}

CoefficientField1D::CoefficientField1D(MotionFamily fam, SpaceTimeField f, std::function<double(double, double)> drift)
    : fam_(std::move(fam)), f_(std::move(f)), drift_(std::move(drift)) {
  if (fam_.dim() != 1) throw Error(Errc::InvalidArgument, "1D coefficient field needs a one-dimensional family");
  const auto& ref = fam_.reference();
  if (ref.kind() == geometry::ReferenceDomain::Kind::Interval) {
    lo_ = ref.lo();
    hi_ = ref.hi();
  } else if (ref.kind() == geometry::ReferenceDomain::Kind::LevelBand) {
    lo_ = ref.extents()[0];
    hi_ = ref.extents()[1];
  } else {
    lo_ = -ref.hi();
    hi_ = ref.hi();
  }
}

Coeff1D CoefficientField1D::operator()(double t, double y) const {
  const bool zero_f = f_.is_zero();
  const ScalarField f = zero_f ? ScalarField{} : ScalarField([this](double tau, const Vec& x) { return f_(tau + offset_, x(0)); });
  DriftField drift;
  if (drift_) drift = [this](double tau, const Vec& x) { return vec1(drift_(tau + offset_, x(0))); };
  const CoefficientSample s = pullback_coefficients(fam_, f, t, vec1(y), drift);
  const Coeff1D c{s.B(0, 0), s.a(0), s.b(0), s.g};
  if (!std::isfinite(c.B) || !std::isfinite(c.a) || !std::isfinite(c.b) || !std::isfinite(c.g))
    throw Error(Errc::QuadratureFailure, "non-finite coefficient at t=" + std::to_string(t));
  return c;
}

void CoefficientField1D::sample(double t, std::span<const double> ys, std::span<Coeff1D> out, Exec exec) const {
  for_each_index(exec, ys.size(), [&](std::size_t i) { out[i] = (*this)(t, ys[i]); });
}

}  // namespace movwave::transform
