#include "movwave/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "movwave/error.hpp"

namespace movwave {

namespace {

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

QuadratureRule composite_gauss(double a, double b, int panels, int order) {
  const QuadratureRule& base = gauss_legendre(order);
  QuadratureRule rule;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      rule.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

double integrate_gauss(const std::function<double(double)>& fn, double a, double b, int panels, int order) {
  const QuadratureRule rule = composite_gauss(a, b, panels, order);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * fn(rule.nodes[i]);
  return acc;
}

namespace {

double simpson_step(const std::function<double(double)>& fn, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = fn(lm), frm = fn(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  // Pre-split into panels so oscillatory integrands cannot fool the first estimate.
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double acc = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + p * h, hi = (p + 1 == kPanels) ? b : a + (p + 1) * h;
    const double fa = fn(lo), fb = fn(hi), fm = fn(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    acc += simpson_step(fn, lo, hi, fa, fm, fb, whole, tol / kPanels, max_depth);
  }
  return acc;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

}  // namespace movwave
