#pragma once

#include <functional>
#include <span>
#include <vector>

#include "movwave/expr.hpp"
#include "movwave/geometry.hpp"
#include "movwave/parallel.hpp"
#include "movwave/trajectory.hpp"

namespace movwave::transform {

using geometry::MotionFamily;

using ScalarField = std::function<double(double t, const Vec& x)>;
using DriftField = std::function<Vec(double t, const Vec& x)>;

struct CoefficientSample {
  Mat B;
  Vec a;
  Vec b;
  double g = 0.0;
  double t = 0.0;
  Vec y;
};

// Coefficients of the fixed-domain problem
//   v_tt - div(B grad v) + a.grad v - 2 b.grad v_t = g.
// An optional physical drift c (for u_tt - lap u + c.grad u = f) adds DPsi c.
CoefficientSample pullback_coefficients(const MotionFamily& fam, const ScalarField& f, double t, const Vec& y,
                                        const DriftField& drift = {});

struct TransformedData {
  std::function<double(const Vec&)> v0;
  std::function<double(const Vec&)> v1;
};

TransformedData pullback_initial(const MotionFamily& fam, std::function<double(const Vec&)> u0,
                                 std::function<Vec(const Vec&)> grad_u0, std::function<double(const Vec&)> u1);

double ellipticity_constant(const MotionFamily& fam, geometry::ValidateGrid grid = {}, Exec exec = Exec::Parallel);

struct PushedValue {
  double u = 0.0;
  double u_t = 0.0;
  Vec grad;
  bool outside = false;
};

// Evaluates u(t, x) = v(t, Psi(t, x)); zero extension outside Omega_t.
PushedValue pushforward(const MotionFamily& fam, const Trajectory& v, double t, const Vec& x);

struct LiftedData {
  SpaceTimeField f;
  Expr u0;
  Expr u1;
};

// 1D lifting of Dirichlet data W: f = W_xx - W_tt, u0 = U0 - W(0), u1 = U1 - W_t(0).
// `fixed_points` are the fixed boundary points where U0 must match W(0, .);
// `moving_boundary` (optional) gives the moving endpoint where W must vanish.
LiftedData lift_dirichlet(const SpaceTimeField& W, const Expr& U0, const Expr& U1,
                          const std::vector<double>& fixed_points,
                          const std::function<double(double)>& moving_boundary = {}, double horizon = 1.0,
                          double tol = 1e-9);

// One-dimensional coefficient field used by the solvers.
struct Coeff1D {
  double B = 1.0, a = 0.0, b = 0.0, g = 0.0;
};

class CoefficientField1D {
 public:
  CoefficientField1D(MotionFamily fam, SpaceTimeField f, std::function<double(double, double)> drift = {});

  Coeff1D operator()(double t, double y) const;
  void sample(double t, std::span<const double> ys, std::span<Coeff1D> out, Exec exec) const;

  const MotionFamily& family() const { return fam_; }
  const SpaceTimeField& forcing() const { return f_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double horizon() const { return fam_.horizon(); }
  // Absolute time of the family's t = 0, applied to f and the drift.
  void set_time_offset(double offset) { offset_ = offset; }
  double time_offset() const { return offset_; }

 private:
  MotionFamily fam_;
  SpaceTimeField f_;
  std::function<double(double, double)> drift_;
  double lo_, hi_;
  double offset_ = 0.0;
};

}  // namespace movwave::transform
