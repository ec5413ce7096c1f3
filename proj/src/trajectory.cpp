#include "movwave/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "movwave/error.hpp"

namespace movwave {

SpectralBasis::SpectralBasis(double lo, double length, int modes) : lo_(lo), length_(length), modes_(modes) {
  if (!(length > 0.0) || modes < 1) throw Error(Errc::InvalidArgument, "spectral basis needs L > 0 and m >= 1");
}

double SpectralBasis::value(int k, double y) const {
  return std::sqrt(2.0 / length_) * std::sin(k * std::numbers::pi * (y - lo_) / length_);
}

double SpectralBasis::derivative(int k, double y) const {
  const double w = k * std::numbers::pi / length_;
  return std::sqrt(2.0 / length_) * w * std::cos(w * (y - lo_));
}

double SpectralBasis::eigenvalue(int k) const {
  const double w = k * std::numbers::pi / length_;
  return w * w;
}

std::pair<double, double> Trajectory::extent(std::size_t k) const {
  if (!extents.empty()) return extents[k];
  return {lo, lo + length};
}

SpectralBasis Trajectory::basis() const {
  return SpectralBasis(lo, length, static_cast<int>(values.empty() ? 1 : values.front().size()));
}

std::vector<double> Trajectory::nodes(std::size_t k) const {
  const auto [a, b] = extent(k);
  const std::size_t n = static_cast<std::size_t>(values[k].size()) - 1;
  std::vector<double> x(n + 1);
  for (std::size_t i = 0; i <= n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  return x;
}

VecX nodal_gradient(const VecX& v, double h) {
  const auto n = v.size();
  VecX g(n);
  if (n < 3) {
    g.setConstant(n == 2 ? (v(1) - v(0)) / h : 0.0);
    return g;
  }
  for (Eigen::Index i = 1; i + 1 < n; ++i) g(i) = (v(i + 1) - v(i - 1)) / (2.0 * h);
  g(0) = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
  g(n - 1) = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h);
  return g;
}

Trajectory::Sample Trajectory::sample(std::size_t k, double y) const {
  Sample s;
  const auto [a, b] = extent(k);
  const double tol = 1e-12 * std::max(1.0, std::abs(b - a));
  if (y < a - tol || y > b + tol) {
    s.outside = true;
    return s;
  }
  if (representation == Representation::Modal) {
    const SpectralBasis w = basis();
    for (int j = 0; j < w.modes(); ++j) {
      const double phi = w.value(j + 1, y);
      s.v += values[k](j) * phi;
      s.v_t += velocities[k](j) * phi;
      s.v_y += values[k](j) * w.derivative(j + 1, y);
    }
    return s;
  }
  const VecX& v = values[k];
  const VecX& vt = velocities[k];
  const auto n = v.size() - 1;
  const double h = (b - a) / static_cast<double>(n);
  const double pos = std::clamp((y - a) / h, 0.0, static_cast<double>(n));
  const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), n - 1);
  const double w = pos - static_cast<double>(i);
  s.v = (1.0 - w) * v(i) + w * v(i + 1);
  s.v_t = (1.0 - w) * vt(i) + w * vt(i + 1);
  auto grad = [&](Eigen::Index j) {
    if (j == 0) return (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    if (j == n) return (3.0 * v(n) - 4.0 * v(n - 1) + v(n - 2)) / (2.0 * h);
    return (v(j + 1) - v(j - 1)) / (2.0 * h);
  };
  s.v_y = (1.0 - w) * grad(i) + w * grad(i + 1);
  return s;
}

Trajectory::Sample Trajectory::sample_at(double t, double y) const {
  if (times.empty()) throw Error(Errc::InvalidArgument, "empty trajectory");
  if (t <= times.front()) return sample(0, y);
  if (t >= times.back()) return sample(times.size() - 1, y);
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin());
  const double t0 = times[k - 1], t1 = times[k];
  const double w = (t - t0) / (t1 - t0);
  if (w < 1e-12) return sample(k - 1, y);
  if (w > 1.0 - 1e-12) return sample(k, y);
  const Sample a = sample(k - 1, y), b = sample(k, y);
  Sample s;
  s.v = (1.0 - w) * a.v + w * b.v;
  s.v_y = (1.0 - w) * a.v_y + w * b.v_y;
  s.v_t = (1.0 - w) * a.v_t + w * b.v_t;
  s.outside = a.outside && b.outside;
  return s;
}

}  // namespace movwave
