#pragma once

#include <functional>
#include <vector>

namespace movwave {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(int n);

// Composite rule: `panels` equal panels on [a, b], `order` points each.
QuadratureRule composite_gauss(double a, double b, int panels, int order = 8);

double integrate_gauss(const std::function<double(double)>& fn, double a, double b, int panels, int order = 8);

// Adaptive Simpson with absolute tolerance; depth-limited.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol = 1e-9,
                        int max_depth = 40);

// Trapezoid rule over samples at increasing abscissae.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace movwave
