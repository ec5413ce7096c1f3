#pragma once

#include "movwave/geometry.hpp"

namespace movwave::geometry {

// Flow of X = (rho'/rho)(g - R) grad g / |grad g|^2, integrated with fixed-step
// RK4 together with its variational equation.
class SublevelFlow {
 public:
  SublevelFlow(LevelFunction g, double outer_level, Expr rho, int steps);

  struct State {
    Vec x;
    Mat m;
  };

  Vec field(double t, const Vec& x) const;
  Mat field_jacobian(double t, const Vec& x) const;
  Vec field_dt(double t, const Vec& x) const;

  // Integrates from t0 to t1 with the fixed step count, either direction.
  State flow(double t0, double t1, const Vec& x0, bool variational) const;

  MotionJet jet(double t, const Vec& y) const;
  MotionJet jet_first_order(double t, const Vec& y) const;
  InverseJet inverse(double t, const Vec& x) const;

  const LevelFunction& level() const { return g_; }
  double outer_level() const { return r_; }
  int steps() const { return steps_; }
  void set_steps(int steps) { steps_ = steps; }

 private:
  void check(const Vec& x, double grad_sq) const;
  double det_forward(double t, const Vec& y) const;
  double det_backward(double t, const Vec& x) const;

  LevelFunction g_;
  double r_;
  Expr rho_;
  int steps_;
};

}  // namespace movwave::geometry
