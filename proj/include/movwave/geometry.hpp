#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "movwave/expr.hpp"
#include "movwave/linalg.hpp"
#include "movwave/parallel.hpp"

namespace movwave::geometry {

// Level function g for sublevel-set families.
class LevelFunction {
 public:
  enum class Kind { Norm, EllipticNorm, Affine1D };

  static LevelFunction norm(int dim);                       // |x|, dim 2 or 3
  static LevelFunction elliptic_norm(double w1, double w2);  // sqrt(w1 x1^2 + w2 x2^2)
  static LevelFunction affine_1d(double c0, double c1);      // c0 + c1 x

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;
  // Area of {a < g < b}.
  double band_measure(double a, double b) const;
  std::string str() const;

  // Boundary quadrature on the level set {g = c}; `outward` is the sign
  // multiplying grad g / |grad g| to obtain the outward normal of the band.
  struct LevelSample {
    Vec x;
    Vec normal;
    double weight;
  };
  std::vector<LevelSample> level_samples(double c, double outward, int resolution) const;
  // Deterministic point on {g = c}; s in [0, 1) parametrizes the level set.
  Vec level_point(double c, double s, double s2 = 0.0) const;

 private:
  Kind kind_ = Kind::Norm;
  int dim_ = 2;
  double p0_ = 0.0, p1_ = 0.0;
};

struct BoundaryPoint {
  Vec y;
  Vec normal;     // outward unit normal of the reference domain
  double weight;  // surface quadrature weight (1 for points in 1D)
  int face;
};

class ReferenceDomain {
 public:
  enum class Kind { Interval, Annulus, Box, Tetrahedron, Ball, LevelBand };

  static ReferenceDomain interval(double length);
  static ReferenceDomain interval(double lo, double hi);
  static ReferenceDomain annulus(double inner, double outer, int dim = 2);
  static ReferenceDomain box(std::vector<double> extents);
  static ReferenceDomain tetrahedron(const Vec& normal, double level);
  static ReferenceDomain ball(double radius, int dim);
  static ReferenceDomain level_band(const LevelFunction& g, double lo, double hi);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double measure() const;
  bool contains(const Vec& y, double tol = 0.0) const;
  double max_norm() const;
  std::string str() const;

  // Per-face samples, never at corners or edges.
  std::vector<BoundaryPoint> boundary_samples(int resolution) const;
  // Deterministic samples of the closure, including boundary points.
  std::vector<Vec> interior_samples(int count) const;

  // Interval bounds (Interval and 1D LevelBand).
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const LevelFunction& level() const { return level_; }
  const std::vector<double>& extents() const { return extents_; }
  const Vec& tet_normal() const { return normal_; }

 private:
  Kind kind_ = Kind::Interval;
  int dim_ = 1;
  double lo_ = 0.0, hi_ = 1.0;  // interval bounds, radii, tetra level or band levels
  std::vector<double> extents_;
  Vec normal_;
  LevelFunction level_;
};

enum class MotionKind { Identity, OneDScaling, Homothetic, SublevelFlow };
std::string motion_kind_name(MotionKind kind);

struct MotionSpec {
  MotionKind kind = MotionKind::Identity;
  ReferenceDomain reference = ReferenceDomain::interval(1.0);  // Identity and Homothetic
  double horizon = 1.0;
  Expr scale = Expr::constant(1.0);  // l(t), lambda(t) or rho(t)
  LevelFunction level = LevelFunction::norm(2);
  double outer_level = 1.0;  // R
  double tolerance = 0.0;    // 0 selects 1e-9 analytic, 1e-6 flow
};

struct MotionJet {
  Vec phi, phi_t, phi_tt;
  Mat dphi, dphi_t;
  Vec grad_det_dphi;
  double det_dphi = 1.0;
  double det_dphi_t = 0.0;
  // Inverse-map quantities composed with phi.
  Mat dpsi;
  Vec psi_t;
  double det_dpsi = 1.0;
  Vec grad_det_dpsi;  // gradient in x
  double det_dpsi_t = 0.0;
};

struct InverseJet {
  Vec psi;
  Mat dpsi;
  Vec psi_t;
};

class SublevelFlow;

class MotionFamily {
 public:
  MotionKind kind() const { return spec_.kind; }
  const ReferenceDomain& reference() const { return reference_; }
  const MotionSpec& spec() const { return spec_; }
  double horizon() const { return spec_.horizon; }
  int dim() const { return reference_.dim(); }
  double tolerance() const { return tolerance_; }

  // l, lambda or rho and their time derivatives (0 for Identity).
  double scale(double t, int order = 0) const;
  bool nondecreasing() const;

  MotionJet jet(double t, const Vec& y) const;
  // Fills phi, phi_t, dphi, det_dphi and psi_t only; cheaper for flow families.
  MotionJet jet_first_order(double t, const Vec& y) const;
  InverseJet inverse(double t, const Vec& x) const;
  Vec map(double t, const Vec& y) const;
  bool contains(double t, const Vec& x, double tol = 1e-12) const;
  double geometric_measure(double t) const;
  int flow_steps() const;

 private:
  friend MotionFamily build_motion(const MotionSpec& spec);
  MotionSpec spec_;
  ReferenceDomain reference_;
  double tolerance_ = 1e-9;
  std::shared_ptr<const SublevelFlow> flow_;
};

MotionFamily build_motion(const MotionSpec& spec);

// Convenience constructors.
MotionFamily identity_family(const ReferenceDomain& reference, double horizon);
MotionFamily scaling_family(const Expr& length, double horizon);
MotionFamily homothetic_family(const ReferenceDomain& reference, const Expr& lambda, double horizon);
MotionFamily sublevel_family(const LevelFunction& g, double outer_level, const Expr& rho, double horizon);

struct ValidateGrid {
  int times = 20;
  int points = 20;
};

struct RegularityReport {
  double max_speed = 0.0;
  std::array<double, 7> identity_residual{};  // identities (a)-(g) of the Jacobian lemma
  double min_det = 0.0;
  double h1prime_bound = 0.0;  // largest sampled second derivative / Lipschitz quotient
  double tolerance = 0.0;
  int samples = 0;
  bool h1_pass = false;
  bool h1prime_pass = false;
  bool h2_pass = false;
  bool identities_pass = false;
  double max_identity_residual() const;
  bool pass() const { return h1_pass && h1prime_pass && h2_pass && identities_pass; }
};

RegularityReport validate(const MotionFamily& fam, ValidateGrid grid = {}, Exec exec = Exec::Parallel);

struct BoundarySample {
  Vec x;
  Vec normal;
  SpaceTimeVec spacetime_normal;  // (t-component, x-components)
  double omega = 0.0;
  double omega_spacetime = 0.0;
  double area_factor = 1.0;  // detDPhi |DPsi^T nu0|
  double weight = 1.0;
  int face = 0;
};

std::vector<BoundarySample> boundary_kinematics(const MotionFamily& fam, double t,
                                                const std::vector<BoundaryPoint>& ys);

double check_level_identity(const MotionFamily& fam, double t, const Vec& y);
double check_speed_condition(const MotionFamily& fam, ValidateGrid grid = {});

}  // namespace movwave::geometry
