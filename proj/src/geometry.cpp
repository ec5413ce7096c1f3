#include "movwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "movwave/error.hpp"
#include "movwave/quadrature.hpp"
#include "sublevel.hpp"

namespace movwave::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;

double frac(double x) { return x - std::floor(x); }

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_segment(std::vector<BoundaryPoint>& out, const Vec& a, const Vec& b, const Vec& normal, int order,
                 int face) {
  const QuadratureRule& rule = gauss_legendre(order);
  const double len = (b - a).norm();
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = 0.5 * (rule.nodes[i] + 1.0);
    out.push_back({a + s * (b - a), normal, 0.5 * len * rule.weights[i], face});
  }
}

// Collapsed Gauss rule on the triangle (a, b, c).
void add_triangle(std::vector<BoundaryPoint>& out, const Vec& a, const Vec& b, const Vec& c, const Vec& normal,
                  int order, int face) {
  const QuadratureRule& rule = gauss_legendre(order);
  const Vec e1 = b - a, e2 = c - a;
  const Eigen::Vector3d u1(e1(0), e1(1), e1(2)), u2(e2(0), e2(1), e2(2));
  const double twice_area = u1.cross(u2).norm();
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = 0.5 * (rule.nodes[i] + 1.0);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double v = 0.5 * (rule.nodes[j] + 1.0) * (1.0 - u);
      const double w = 0.25 * rule.weights[i] * rule.weights[j] * (1.0 - u) * twice_area;
      out.push_back({a + u * e1 + v * e2, normal, w, face});
    }
  }
}

void add_rectangle(std::vector<BoundaryPoint>& out, const Vec& origin, const Vec& e1, const Vec& e2,
                   const Vec& normal, int order, int face) {
  const QuadratureRule& rule = gauss_legendre(order);
  const double area = e1.norm() * e2.norm();
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double u = 0.5 * (rule.nodes[i] + 1.0), v = 0.5 * (rule.nodes[j] + 1.0);
      out.push_back({origin + u * e1 + v * e2, normal, 0.25 * rule.weights[i] * rule.weights[j] * area, face});
    }
}

}  // namespace

// ---------------------------------------------------------------- LevelFunction

LevelFunction LevelFunction::norm(int dim) {
  if (dim < 2 || dim > 3) throw Error(Errc::InvalidArgument, "Norm level function supports dimension 2 or 3");
  LevelFunction g;
  g.kind_ = Kind::Norm;
  g.dim_ = dim;
  return g;
}

LevelFunction LevelFunction::elliptic_norm(double w1, double w2) {
  if (!(w1 > 0.0 && w2 > 0.0)) throw Error(Errc::InvalidArgument, "EllipticNorm weights must be positive");
  LevelFunction g;
  g.kind_ = Kind::EllipticNorm;
  g.dim_ = 2;
  g.p0_ = w1;
  g.p1_ = w2;
  return g;
}

LevelFunction LevelFunction::affine_1d(double c0, double c1) {
  if (c1 == 0.0) throw Error(Errc::GradientVanishes, "Affine1D slope is zero");
  LevelFunction g;
  g.kind_ = Kind::Affine1D;
  g.dim_ = 1;
  g.p0_ = c0;
  g.p1_ = c1;
  return g;
}

double LevelFunction::value(const Vec& x) const {
  switch (kind_) {
    case Kind::Norm: return x.norm();
    case Kind::EllipticNorm: return std::sqrt(p0_ * x(0) * x(0) + p1_ * x(1) * x(1));
    case Kind::Affine1D: return p0_ + p1_ * x(0);
  }
  return 0.0;
}

Vec LevelFunction::gradient(const Vec& x) const {
  switch (kind_) {
    case Kind::Norm: {
      const double r = x.norm();
      return r > 0.0 ? Vec(x / r) : Vec(Vec::Zero(x.size()));
    }
    case Kind::EllipticNorm: {
      const double g = value(x);
      return g > 0.0 ? vec2(p0_ * x(0) / g, p1_ * x(1) / g) : vec2(0.0, 0.0);
    }
    case Kind::Affine1D: return vec1(p1_);
  }
  return {};
}

Mat LevelFunction::hessian(const Vec& x) const {
  const int n = x.size();
  switch (kind_) {
    case Kind::Norm: {
      const double r = x.norm();
      if (r == 0.0) return Mat::Zero(n, n);
      const Vec u = x / r;
      return (Mat::Identity(n, n) - u * u.transpose()) / r;
    }
    case Kind::EllipticNorm: {
      const double g = value(x);
      if (g == 0.0) return Mat::Zero(2, 2);
      Mat w = Mat::Zero(2, 2);
      w(0, 0) = p0_;
      w(1, 1) = p1_;
      const Vec wx = w * x;
      return w / g - wx * wx.transpose() / (g * g * g);
    }
    case Kind::Affine1D: return Mat::Zero(1, 1);
  }
  return {};
}

double LevelFunction::band_measure(double a, double b) const {
  switch (kind_) {
    case Kind::Norm:
      return dim_ == 2 ? kPi * (b * b - a * a) : 4.0 / 3.0 * kPi * (b * b * b - a * a * a);
    case Kind::EllipticNorm: return kPi * (b * b - a * a) / std::sqrt(p0_ * p1_);
    case Kind::Affine1D: return (b - a) / std::abs(p1_);
  }
  return 0.0;
}

std::string LevelFunction::str() const {
  switch (kind_) {
    case Kind::Norm: return "Norm(" + std::to_string(dim_) + ")";
    case Kind::EllipticNorm: return "EllipticNorm(" + num(p0_) + ", " + num(p1_) + ")";
    case Kind::Affine1D: return "Affine1D(" + num(p0_) + ", " + num(p1_) + ")";
  }
  return {};
}

Vec LevelFunction::level_point(double c, double s, double s2) const {
  const double th = 2.0 * kPi * s;
  switch (kind_) {
    case Kind::Norm:
      if (dim_ == 2) return vec2(c * std::cos(th), c * std::sin(th));
      {
        const double z = 2.0 * s2 - 1.0, rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        return vec3(c * rho * std::cos(th), c * rho * std::sin(th), c * z);
      }
    case Kind::EllipticNorm: return vec2(c * std::cos(th) / std::sqrt(p0_), c * std::sin(th) / std::sqrt(p1_));
    case Kind::Affine1D: return vec1((c - p0_) / p1_);
  }
  return {};
}

std::vector<LevelFunction::LevelSample> LevelFunction::level_samples(double c, double outward, int m) const {
  std::vector<LevelSample> out;
  auto normal_at = [&](const Vec& x) -> Vec {
    const Vec g = gradient(x);
    return outward * g / g.norm();
  };
  if (kind_ == Kind::Affine1D) {
    const Vec x = level_point(c, 0.0);
    out.push_back({x, normal_at(x), 1.0});
    return out;
  }
  if (dim_ == 2) {
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * j / m;
      Vec x, tangent;
      if (kind_ == Kind::Norm) {
        x = vec2(c * std::cos(th), c * std::sin(th));
        tangent = vec2(-c * std::sin(th), c * std::cos(th));
      } else {
        x = vec2(c * std::cos(th) / std::sqrt(p0_), c * std::sin(th) / std::sqrt(p1_));
        tangent = vec2(-c * std::sin(th) / std::sqrt(p0_), c * std::cos(th) / std::sqrt(p1_));
      }
      out.push_back({x, normal_at(x), tangent.norm() * 2.0 * kPi / m});
    }
    return out;
  }
  const int nz = std::max(2, m / 2);
  const QuadratureRule& rule = gauss_legendre(nz);
  for (int i = 0; i < nz; ++i) {
    const double z = rule.nodes[static_cast<std::size_t>(i)];
    const double rho = std::sqrt(1.0 - z * z);
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * (j + 0.5) / m;
      const Vec x = vec3(c * rho * std::cos(th), c * rho * std::sin(th), c * z);
      out.push_back({x, normal_at(x), c * c * rule.weights[static_cast<std::size_t>(i)] * 2.0 * kPi / m});
    }
  }
  return out;
}

// ---------------------------------------------------------------- ReferenceDomain

ReferenceDomain ReferenceDomain::interval(double length) { return interval(0.0, length); }

ReferenceDomain ReferenceDomain::interval(double lo, double hi) {
  if (!(hi > lo)) throw Error(Errc::InvalidArgument, "interval requires positive length");
  ReferenceDomain d;
  d.kind_ = Kind::Interval;
  d.dim_ = 1;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

ReferenceDomain ReferenceDomain::annulus(double inner, double outer, int dim) {
  if (!(inner > 0.0 && outer > inner)) throw Error(Errc::InvalidArgument, "annulus requires 0 < inner < outer");
  ReferenceDomain d;
  d.kind_ = Kind::Annulus;
  d.dim_ = dim;
  d.lo_ = inner;
  d.hi_ = outer;
  d.level_ = LevelFunction::norm(dim);
  return d;
}

ReferenceDomain ReferenceDomain::box(std::vector<double> extents) {
  if (extents.empty() || extents.size() > kMaxDim) throw Error(Errc::InvalidArgument, "box dimension must be 1..3");
  for (double e : extents)
    if (!(e > 0.0)) throw Error(Errc::InvalidArgument, "box extents must be positive");
  ReferenceDomain d;
  d.kind_ = Kind::Box;
  d.dim_ = static_cast<int>(extents.size());
  d.extents_ = std::move(extents);
  return d;
}

ReferenceDomain ReferenceDomain::tetrahedron(const Vec& normal, double level) {
  if (normal.size() < 2 || normal.size() > 3) throw Error(Errc::InvalidArgument, "tetrahedron dimension must be 2 or 3");
  if (std::abs(normal.norm() - 1.0) > 1e-12) throw Error(Errc::InvalidArgument, "tetrahedron normal must be unit");
  if ((normal.array() <= 0.0).any()) throw Error(Errc::InvalidArgument, "tetrahedron normal must be positive");
  if (!(level > 0.0)) throw Error(Errc::InvalidArgument, "tetrahedron level must be positive");
  ReferenceDomain d;
  d.kind_ = Kind::Tetrahedron;
  d.dim_ = normal.size();
  d.normal_ = normal;
  d.hi_ = level;
  return d;
}

ReferenceDomain ReferenceDomain::ball(double radius, int dim) {
  if (!(radius > 0.0)) throw Error(Errc::InvalidArgument, "ball radius must be positive");
  if (dim < 1 || dim > 3) throw Error(Errc::InvalidArgument, "ball dimension must be 1..3");
  ReferenceDomain d;
  d.kind_ = Kind::Ball;
  d.dim_ = dim;
  d.hi_ = radius;
  return d;
}

ReferenceDomain ReferenceDomain::level_band(const LevelFunction& g, double lo, double hi) {
  if (!(hi > lo)) throw Error(Errc::InvalidArgument, "level band requires lo < hi");
  if (g.kind() == LevelFunction::Kind::Norm) return annulus(lo, hi, g.dim());
  ReferenceDomain d;
  d.kind_ = Kind::LevelBand;
  d.dim_ = g.dim();
  d.lo_ = lo;
  d.hi_ = hi;
  d.level_ = g;
  if (g.dim() == 1) {
    const double a = g.level_point(lo, 0.0)(0), b = g.level_point(hi, 0.0)(0);
    d.extents_ = {std::min(a, b), std::max(a, b)};
  }
  return d;
}

double ReferenceDomain::measure() const {
  switch (kind_) {
    case Kind::Interval: return hi_ - lo_;
    case Kind::Annulus:
    case Kind::LevelBand: return level_.band_measure(lo_, hi_);
    case Kind::Box: {
      double m = 1.0;
      for (double e : extents_) m *= e;
      return m;
    }
    case Kind::Tetrahedron: {
      double m = std::pow(hi_, dim_) / factorial(dim_);
      for (int i = 0; i < dim_; ++i) m /= normal_(i);
      return m;
    }
    case Kind::Ball:
      if (dim_ == 1) return 2.0 * hi_;
      if (dim_ == 2) return kPi * hi_ * hi_;
      return 4.0 / 3.0 * kPi * hi_ * hi_ * hi_;
  }
  return 0.0;
}

bool ReferenceDomain::contains(const Vec& y, double tol) const {
  switch (kind_) {
    case Kind::Interval: return y(0) >= lo_ - tol && y(0) <= hi_ + tol;
    case Kind::Annulus:
    case Kind::LevelBand: {
      const double g = level_.value(y);
      return g >= lo_ - tol && g <= hi_ + tol;
    }
    case Kind::Box:
      for (int i = 0; i < dim_; ++i)
        if (y(i) < -tol || y(i) > extents_[static_cast<std::size_t>(i)] + tol) return false;
      return true;
    case Kind::Tetrahedron:
      if ((y.array() < -tol).any()) return false;
      return normal_.dot(y) <= hi_ + tol;
    case Kind::Ball: return y.norm() <= hi_ + tol;
  }
  return false;
}

double ReferenceDomain::max_norm() const {
  switch (kind_) {
    case Kind::Interval: return std::max(std::abs(lo_), std::abs(hi_));
    case Kind::Annulus: return hi_;
    case Kind::LevelBand:
      if (dim_ == 1) return std::max(std::abs(extents_[0]), std::abs(extents_[1]));
      return level_.level_point(hi_, 0.0).norm() > level_.level_point(hi_, 0.25).norm()
                 ? level_.level_point(hi_, 0.0).norm()
                 : level_.level_point(hi_, 0.25).norm();
    case Kind::Box: {
      double s = 0.0;
      for (double e : extents_) s += e * e;
      return std::sqrt(s);
    }
    case Kind::Tetrahedron: return hi_ / normal_.minCoeff();
    case Kind::Ball: return hi_;
  }
  return 0.0;
}

std::string ReferenceDomain::str() const {
  switch (kind_) {
    case Kind::Interval: return "Interval(" + num(lo_) + ", " + num(hi_) + ")";
    case Kind::Annulus: return "Annulus(" + num(lo_) + ", " + num(hi_) + ", " + std::to_string(dim_) + ")";
    case Kind::LevelBand: return "LevelBand(" + level_.str() + ", " + num(lo_) + ", " + num(hi_) + ")";
    case Kind::Box: {
      std::string s = "Box(";
      for (std::size_t i = 0; i < extents_.size(); ++i) s += (i ? ", " : "") + num(extents_[i]);
      return s + ")";
    }
    case Kind::Tetrahedron: {
      std::string s = "Tetrahedron(" + num(hi_);
      for (int i = 0; i < dim_; ++i) s += ", " + num(normal_(i));
      return s + ")";
    }
    case Kind::Ball: return "Ball(" + num(hi_) + ", " + std::to_string(dim_) + ")";
  }
  return {};
}

std::vector<BoundaryPoint> ReferenceDomain::boundary_samples(int m) const {
  m = std::max(m, 2);
  std::vector<BoundaryPoint> out;
  auto from_level = [&](const LevelFunction& g, double c, double outward, int face) {
    for (auto& s : g.level_samples(c, outward, m)) out.push_back({s.x, s.normal, s.weight, face});
  };
  switch (kind_) {
    case Kind::Interval:
      out.push_back({vec1(lo_), vec1(-1.0), 1.0, 0});
      out.push_back({vec1(hi_), vec1(1.0), 1.0, 1});
      break;
    case Kind::Annulus:
    case Kind::LevelBand:
      from_level(level_, lo_, -1.0, 0);
      from_level(level_, hi_, 1.0, 1);
      break;
    case Kind::Ball:
      if (dim_ == 1) {
        out.push_back({vec1(-hi_), vec1(-1.0), 1.0, 0});
        out.push_back({vec1(hi_), vec1(1.0), 1.0, 1});
      } else {
        from_level(LevelFunction::norm(dim_), hi_, 1.0, 0);
      }
      break;
    case Kind::Box: {
      if (dim_ == 1) {
        out.push_back({vec1(0.0), vec1(-1.0), 1.0, 0});
        out.push_back({vec1(extents_[0]), vec1(1.0), 1.0, 1});
        break;
      }
      const int order = dim_ == 2 ? m : std::max(2, m / 4);
      for (int axis = 0; axis < dim_; ++axis) {
        for (int side = 0; side < 2; ++side) {
          Vec origin = Vec::Zero(dim_);
          origin(axis) = side ? extents_[static_cast<std::size_t>(axis)] : 0.0;
          Vec normal = Vec::Zero(dim_);
          normal(axis) = side ? 1.0 : -1.0;
          const int face = 2 * axis + side;
          const int a1 = (axis + 1) % dim_;
          Vec e1 = Vec::Zero(dim_);
          e1(a1) = extents_[static_cast<std::size_t>(a1)];
          if (dim_ == 2) {
            add_segment(out, origin, origin + e1, normal, order, face);
          } else {
            const int a2 = (axis + 2) % dim_;
            Vec e2 = Vec::Zero(dim_);
            e2(a2) = extents_[static_cast<std::size_t>(a2)];
            add_rectangle(out, origin, e1, e2, normal, order, face);
          }
        }
      }
      break;
    }
    case Kind::Tetrahedron: {
      std::vector<Vec> vertex(static_cast<std::size_t>(dim_));
      for (int i = 0; i < dim_; ++i) {
        vertex[static_cast<std::size_t>(i)] = Vec::Zero(dim_);
        vertex[static_cast<std::size_t>(i)](i) = hi_ / normal_(i);
      }
      const Vec origin = Vec::Zero(dim_);
      if (dim_ == 2) {
        add_segment(out, origin, vertex[1], vec2(-1.0, 0.0), m, 0);
        add_segment(out, origin, vertex[0], vec2(0.0, -1.0), m, 1);
        add_segment(out, vertex[0], vertex[1], normal_, m, 2);
      } else {
        const int order = std::max(2, m / 4);
        add_triangle(out, origin, vertex[1], vertex[2], vec3(-1.0, 0.0, 0.0), order, 0);
        add_triangle(out, origin, vertex[0], vertex[2], vec3(0.0, -1.0, 0.0), order, 1);
        add_triangle(out, origin, vertex[0], vertex[1], vec3(0.0, 0.0, -1.0), order, 2);
        add_triangle(out, vertex[0], vertex[1], vertex[2], normal_, order, 3);
      }
      break;
    }
  }
  return out;
}

std::vector<Vec> ReferenceDomain::interior_samples(int count) const {
  count = std::max(count, 2);
  std::vector<Vec> out;
  const double last = count - 1;
  switch (kind_) {
    case Kind::Interval:
      for (int j = 0; j < count; ++j) out.push_back(vec1(lo_ + (hi_ - lo_) * j / last));
      break;
    case Kind::Annulus:
    case Kind::LevelBand:
      for (int j = 0; j < count; ++j) {
        const double c = lo_ + (hi_ - lo_) * j / last;
        out.push_back(level_.level_point(c, frac(j * kGolden), frac(j * kGolden * kGolden + 0.5 / count)));
      }
      break;
    case Kind::Ball:
      for (int j = 0; j < count; ++j) {
        const double s = j / last;
        if (dim_ == 1) {
          out.push_back(vec1(-hi_ + 2.0 * hi_ * s));
        } else if (dim_ == 2) {
          const double r = hi_ * std::sqrt(s), th = 2.0 * kPi * frac(j * kGolden);
          out.push_back(vec2(r * std::cos(th), r * std::sin(th)));
        } else {
          const double r = hi_ * std::cbrt(s);
          const Vec d = LevelFunction::norm(3).level_point(1.0, frac(j * kGolden), (j + 0.5) / count);
          out.push_back(r * d);
        }
      }
      break;
    case Kind::Box:
      for (int j = 0; j < count; ++j) {
        Vec y(dim_);
        static const int kBases[3] = {2, 3, 5};
        for (int i = 0; i < dim_; ++i) {
          const double u = (j == count - 1) ? 1.0 : halton(j, kBases[i]);
          y(i) = u * extents_[static_cast<std::size_t>(i)];
        }
        out.push_back(y);
      }
      break;
    case Kind::Tetrahedron: {
      out.push_back(Vec::Zero(dim_));
      for (int i = 0; i < dim_ && static_cast<int>(out.size()) < count; ++i) {
        Vec v = Vec::Zero(dim_);
        v(i) = hi_ / normal_(i);
        out.push_back(v);
      }
      static const int kBases[3] = {2, 3, 5};
      for (int j = 1; static_cast<int>(out.size()) < count; ++j) {
        Vec y(dim_);
        for (int i = 0; i < dim_; ++i) y(i) = halton(j, kBases[i]) * hi_ / normal_(i);
        if (normal_.dot(y) <= hi_) out.push_back(y);
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------- MotionFamily

std::string motion_kind_name(MotionKind kind) {
  switch (kind) {
    case MotionKind::Identity: return "identity";
    case MotionKind::OneDScaling: return "scaling";
    case MotionKind::Homothetic: return "homothetic";
    case MotionKind::SublevelFlow: return "sublevel";
  }
  return {};
}

double MotionFamily::scale(double t, int order) const {
  if (spec_.kind == MotionKind::Identity) return order == 0 ? 1.0 : 0.0;
  return spec_.scale.eval(t, order);
}

bool MotionFamily::nondecreasing() const {
  if (spec_.kind == MotionKind::Identity) return true;
  constexpr int kSamples = 1001;
  for (int i = 0; i < kSamples; ++i)
    if (scale(horizon() * i / (kSamples - 1), 1) < -1e-14) return false;
  return true;
}

int MotionFamily::flow_steps() const { return flow_ ? flow_->steps() : 0; }

MotionJet MotionFamily::jet(double t, const Vec& y) const {
  const int n = y.size();
  const Mat eye = Mat::Identity(n, n);
  MotionJet j;
  switch (spec_.kind) {
    case MotionKind::Identity:
      j.phi = y;
      j.phi_t = j.phi_tt = j.grad_det_dphi = j.psi_t = j.grad_det_dpsi = Vec::Zero(n);
      j.dphi = j.dpsi = eye;
      j.dphi_t = Mat::Zero(n, n);
      return j;
    case MotionKind::OneDScaling:
    case MotionKind::Homothetic: {
      // Phi = s(t) y / s(0) with s = l or lambda (lambda(0) = 1).
      const double s0 = scale(0.0), s = scale(t), sd = scale(t, 1), sdd = scale(t, 2);
      const double c = s / s0;
      j.phi = c * y;
      j.phi_t = sd / s0 * y;
      j.phi_tt = sdd / s0 * y;
      j.dphi = c * eye;
      j.dphi_t = sd / s0 * eye;
      j.det_dphi = std::pow(c, n);
      j.det_dphi_t = n * std::pow(c, n - 1) * sd / s0;
      j.grad_det_dphi = Vec::Zero(n);
      j.dpsi = eye / c;
      j.psi_t = -sd / s * y;
      j.det_dpsi = std::pow(c, -n);
      j.grad_det_dpsi = Vec::Zero(n);
      j.det_dpsi_t = -n * std::pow(c, -n - 1) * sd / s0;
      return j;
    }
    case MotionKind::SublevelFlow:
      return flow_->jet(t, y);
  }
  return j;
}

MotionJet MotionFamily::jet_first_order(double t, const Vec& y) const {
  if (spec_.kind == MotionKind::SublevelFlow) return flow_->jet_first_order(t, y);
  return jet(t, y);
}

InverseJet MotionFamily::inverse(double t, const Vec& x) const {
  const int n = x.size();
  switch (spec_.kind) {
    case MotionKind::Identity:
      return {x, Mat::Identity(n, n), Vec::Zero(n)};
    case MotionKind::OneDScaling:
    case MotionKind::Homothetic: {
      const double s0 = scale(0.0), s = scale(t), sd = scale(t, 1);
      return {s0 / s * x, s0 / s * Mat::Identity(n, n), -s0 * sd / (s * s) * x};
    }
    case MotionKind::SublevelFlow:
      return flow_->inverse(t, x);
  }
  return {};
}

Vec MotionFamily::map(double t, const Vec& y) const {
  switch (spec_.kind) {
    case MotionKind::Identity: return y;
    case MotionKind::OneDScaling:
    case MotionKind::Homothetic: return scale(t) / scale(0.0) * y;
    case MotionKind::SublevelFlow: return flow_->flow(0.0, t, y, false).x;
  }
  return y;
}

bool MotionFamily::contains(double t, const Vec& x, double tol) const {
  if (spec_.kind == MotionKind::SublevelFlow) {
    const double g = spec_.level.value(x);
    return g >= spec_.outer_level - scale(t) - tol && g <= spec_.outer_level + tol;
  }
  return reference_.contains(inverse(t, x).psi, tol);
}

double MotionFamily::geometric_measure(double t) const {
  switch (spec_.kind) {
    case MotionKind::Identity: return reference_.measure();
    case MotionKind::OneDScaling: return reference_.measure() * scale(t) / scale(0.0);
    case MotionKind::Homothetic: return reference_.measure() * std::pow(scale(t), dim());
    case MotionKind::SublevelFlow:
      return spec_.level.band_measure(spec_.outer_level - scale(t), spec_.outer_level);
  }
  return 0.0;
}

MotionFamily build_motion(const MotionSpec& spec) {
  if (!(spec.horizon > 0.0)) throw Error(Errc::InvalidArgument, "horizon must be positive");
  MotionFamily fam;
  fam.spec_ = spec;
  fam.tolerance_ = spec.tolerance > 0.0 ? spec.tolerance : (spec.kind == MotionKind::SublevelFlow ? 1e-6 : 1e-9);
  const double T = spec.horizon;

  constexpr int kSamples = 1001;
  double smax = -1e300;
  if (spec.kind != MotionKind::Identity) {
    for (int i = 0; i < kSamples; ++i) {
      const double t = T * i / (kSamples - 1);
      const double s = spec.scale(t);
      if (!(s > 0.0) || !std::isfinite(s))
        throw Error(Errc::NonPositiveScale, "scale function is not positive at t=" + num(t));
      smax = std::max(smax, s);
    }
  }

  switch (spec.kind) {
    case MotionKind::Identity:
      fam.reference_ = spec.reference;
      break;
    case MotionKind::OneDScaling:
      fam.reference_ = ReferenceDomain::interval(0.0, spec.scale(0.0));
      break;
    case MotionKind::Homothetic:
      if (std::abs(spec.scale(0.0) - 1.0) > 1e-12) throw Error(Errc::InvalidArgument, "homothetic lambda(0) must be 1");
      fam.reference_ = spec.reference;
      break;
    case MotionKind::SublevelFlow: {
      const double r = spec.outer_level, rho0 = spec.scale(0.0), rhoT = spec.scale(T);
      if (smax >= r) throw Error(Errc::LevelOutOfRange, "rho reaches the outer level R");
      if (rho0 > rhoT) throw Error(Errc::LevelOutOfRange, "rho(0) exceeds rho(T)");
      fam.reference_ = ReferenceDomain::level_band(spec.level, r - rho0, r);
      const ReferenceDomain reach = ReferenceDomain::level_band(spec.level, r - smax, r);
      for (const Vec& x : reach.interior_samples(256))
        if (spec.level.gradient(x).norm() < 1e-12) throw Error(Errc::GradientVanishes, "grad g vanishes in the band");
      for (const auto& b : reach.boundary_samples(32))
        if (spec.level.gradient(b.y).norm() < 1e-12) throw Error(Errc::GradientVanishes, "grad g vanishes on the band boundary");

      auto flow = std::make_shared<SublevelFlow>(spec.level, r, spec.scale, 8);
      std::vector<Vec> probes;
      for (const auto& b : fam.reference_.boundary_samples(8)) probes.push_back(b.y);
      for (const Vec& y : fam.reference_.interior_samples(8)) probes.push_back(y);
      for (int steps = 8;; steps *= 2) {
        double diff = 0.0;
        for (const Vec& y : probes) {
          flow->set_steps(steps);
          const double coarse = flow->flow(0.0, T, y, true).m.determinant();
          flow->set_steps(2 * steps);
          const double fine = flow->flow(0.0, T, y, true).m.determinant();
          diff = std::max(diff, std::abs(fine - coarse));
        }
        if (diff < 1e-8 || steps >= (1 << 14)) break;
      }
      fam.flow_ = flow;
      break;
    }
  }
  return fam;
}

MotionFamily identity_family(const ReferenceDomain& reference, double horizon) {
  MotionSpec s;
  s.kind = MotionKind::Identity;
  s.reference = reference;
  s.horizon = horizon;
  return build_motion(s);
}

MotionFamily scaling_family(const Expr& length, double horizon) {
  MotionSpec s;
  s.kind = MotionKind::OneDScaling;
  s.scale = length;
  s.horizon = horizon;
  return build_motion(s);
}

MotionFamily homothetic_family(const ReferenceDomain& reference, const Expr& lambda, double horizon) {
  MotionSpec s;
  s.kind = MotionKind::Homothetic;
  s.reference = reference;
  s.scale = lambda;
  s.horizon = horizon;
  return build_motion(s);
}

MotionFamily sublevel_family(const LevelFunction& g, double outer_level, const Expr& rho, double horizon) {
  MotionSpec s;
  s.kind = MotionKind::SublevelFlow;
  s.level = g;
  s.outer_level = outer_level;
  s.scale = rho;
  s.horizon = horizon;
  return build_motion(s);
}

// ---------------------------------------------------------------- validation

namespace {

struct LightJet {
  double det;
  Mat dphi;
  Vec flux;  // Psi_t o Phi * detDPhi
  Vec phi_t;
};

LightJet light_jet(const MotionFamily& fam, double t, const Vec& y) {
  if (fam.kind() != MotionKind::SublevelFlow) {
    const MotionJet j = fam.jet(t, y);
    return {j.det_dphi, j.dphi, j.psi_t * j.det_dphi, j.phi_t};
  }
  const MotionJet j = fam.jet_first_order(t, y);
  return {j.det_dphi, j.dphi, j.psi_t * j.det_dphi, j.phi_t};
}

}  // namespace

double RegularityReport::max_identity_residual() const {
  return *std::max_element(identity_residual.begin(), identity_residual.end());
}

RegularityReport validate(const MotionFamily& fam, ValidateGrid grid, Exec exec) {
  const double T = fam.horizon();
  const std::vector<Vec> ys = fam.reference().interior_samples(grid.points);
  const int nt = std::max(grid.times, 2);
  const std::size_t ny = ys.size();
  const std::size_t total = static_cast<std::size_t>(nt) * ny;
  const int n = fam.dim();
  const double dt = 1e-5 * std::max(T, 1.0);
  const double dy = 1e-5 * std::max(fam.reference().max_norm(), 1.0);

  struct Sample {
    std::array<double, 7> res{};
    double speed = 0.0, det = 0.0, second = 0.0;
    Vec phi_tt;
    bool finite = true;
  };
  std::vector<Sample> samples(total);

  for_each_index(exec, total, [&](std::size_t k) {
    const double t = T * static_cast<double>(k / ny) / (nt - 1);
    const Vec& y = ys[k % ny];
    Sample& s = samples[k];
    const MotionJet j = fam.jet(t, y);
    const Mat eye = Mat::Identity(n, n);
    s.res[0] = (j.dpsi * j.dphi - eye).cwiseAbs().maxCoeff();
    s.res[1] = std::abs(j.det_dpsi * j.det_dphi - 1.0);
    s.res[2] = (j.psi_t + j.dpsi * j.phi_t).cwiseAbs().maxCoeff();
    s.res[3] = (j.grad_det_dpsi * j.det_dphi + j.det_dpsi * j.dpsi.transpose() * j.grad_det_dphi).cwiseAbs().maxCoeff();
    s.res[4] = std::abs((j.det_dpsi_t + j.grad_det_dpsi.dot(j.phi_t)) * j.det_dphi + j.det_dpsi * j.det_dphi_t);
    s.res[5] = std::abs(j.grad_det_dpsi.dot(j.phi_t) * j.det_dphi - j.psi_t.dot(j.grad_det_dphi) * j.det_dpsi);

    // Fourth-order divergence with a moderate step: the flux is itself a
    // difference quotient for flow families.
    double div = 0.0, second = 0.0;
    const double hd = 1e2 * dy;
    for (int i = 0; i < n; ++i) {
      Vec e = Vec::Zero(n);
      e(i) = 1.0;
      const LightJet p1 = light_jet(fam, t, y + hd * e), m1 = light_jet(fam, t, y - hd * e);
      const LightJet p2 = light_jet(fam, t, y + 2.0 * hd * e), m2 = light_jet(fam, t, y - 2.0 * hd * e);
      div += (8.0 * (p1.flux(i) - m1.flux(i)) - (p2.flux(i) - m2.flux(i))) / (12.0 * hd);
      second = std::max(second, ((p1.dphi - m1.dphi) / (2.0 * hd)).cwiseAbs().maxCoeff());
    }
    s.res[6] = std::abs(j.det_dphi_t + div);

    const LightJet tp = light_jet(fam, t + dt, y), tm = light_jet(fam, t - dt, y);
    s.phi_tt = (tp.phi_t - tm.phi_t) / (2.0 * dt);
    second = std::max(second, s.phi_tt.cwiseAbs().maxCoeff());
    s.second = second;
    s.speed = j.phi_t.norm();
    s.det = j.det_dphi;
    s.finite = j.phi.allFinite() && j.dphi.allFinite() && std::isfinite(j.det_dphi) && s.phi_tt.allFinite();
  });

  RegularityReport r;
  r.tolerance = fam.tolerance();
  r.samples = static_cast<int>(total);
  r.min_det = 1e300;
  bool finite = true;
  for (std::size_t k = 0; k < total; ++k) {
    const Sample& s = samples[k];
    for (int i = 0; i < 7; ++i) r.identity_residual[static_cast<std::size_t>(i)] =
        std::max(r.identity_residual[static_cast<std::size_t>(i)], s.res[static_cast<std::size_t>(i)]);
    r.max_speed = std::max(r.max_speed, s.speed);
    r.min_det = std::min(r.min_det, s.det);
    r.h1prime_bound = std::max(r.h1prime_bound, s.second);
    finite = finite && s.finite;
    if (k >= ny) {
      const double lip = (s.phi_tt - samples[k - ny].phi_tt).norm() / (T / (nt - 1));
      r.h1prime_bound = std::max(r.h1prime_bound, lip);
    }
  }
  r.h1_pass = finite && r.min_det > 0.0;
  r.h1prime_pass = finite && std::isfinite(r.h1prime_bound) && r.h1prime_bound < 1e6;
  r.h2_pass = r.max_speed < 1.0;
  r.identities_pass = r.max_identity_residual() <= r.tolerance;
  return r;
}

std::vector<BoundarySample> boundary_kinematics(const MotionFamily& fam, double t,
                                                const std::vector<BoundaryPoint>& ys) {
  std::vector<BoundarySample> out;
  out.reserve(ys.size());
  const int n = fam.dim();
  for (const BoundaryPoint& b : ys) {
    const MotionJet j = fam.jet(t, b.y);
    const Vec pushed = j.dpsi.transpose() * b.normal;
    const double len = pushed.norm();
    if (!(len > 1e-14) || !std::isfinite(len)) throw Error(Errc::DegenerateNormal, "normal pushforward vanished");
    BoundarySample s;
    s.x = j.phi;
    s.normal = pushed / len;
    SpaceTimeVec st(n + 1);
    st(0) = j.psi_t.dot(b.normal);
    st.tail(n) = pushed;
    s.spacetime_normal = st / st.norm();
    s.omega = j.phi_t.dot(s.normal);
    s.omega_spacetime = -s.spacetime_normal(0) / s.spacetime_normal.tail(n).norm();
    if (std::abs(s.omega - s.omega_spacetime) > 1e-9 * std::max(1.0, std::abs(s.omega)))
      throw Error(Errc::DegenerateNormal, "space-time normal inconsistent with the scalar normal velocity");
    s.area_factor = j.det_dphi * len;
    s.weight = b.weight;
    s.face = b.face;
    out.push_back(s);
  }
  return out;
}

double check_level_identity(const MotionFamily& fam, double t, const Vec& y) {
  if (fam.kind() != MotionKind::SublevelFlow) throw Error(Errc::InvalidArgument, "level identity needs a sublevel family");
  const LevelFunction& g = fam.spec().level;
  const double r = fam.spec().outer_level;
  const Vec x = fam.map(t, y);
  return std::abs(g.value(x) - r - fam.scale(t) / fam.scale(0.0) * (g.value(y) - r));
}

double check_speed_condition(const MotionFamily& fam, ValidateGrid grid) {
  if (fam.kind() != MotionKind::SublevelFlow) throw Error(Errc::InvalidArgument, "speed condition needs a sublevel family");
  const LevelFunction& g = fam.spec().level;
  const double r = fam.spec().outer_level;
  const int nt = std::max(grid.times, 2);
  double margin = 1e300;
  for (int i = 0; i < nt; ++i) {
    const double t = fam.horizon() * i / (nt - 1);
    const ReferenceDomain slice = ReferenceDomain::level_band(g, r - fam.scale(t), r);
    for (const Vec& x : slice.interior_samples(grid.points))
      margin = std::min(margin, g.gradient(x).norm() - fam.scale(t, 1));
  }
  return margin;
}

}  // namespace movwave::geometry
