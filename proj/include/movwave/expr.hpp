#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace movwave {

// Scalar field of one variable drawn from a fixed catalog:
//   Const(c)            c
//   Affine(a, b)        a + b x
//   SineMode(A, k)      A sin(k pi x / L), L bound by the owning domain
//   Poly(c0, c1, ...)   sum c_i x^i
//   Smoothstep(lo, hi[, N])  polynomial ramp from 0 at lo to 1 at hi, C^N (default 2, quintic)
//   Product(e1, e2), Sum(e1, e2), Derivative(e, n)
// Numeric arguments accept decimals, pi and sqrt(number).
class Expr {
 public:
  enum class Kind { Const, Affine, SineMode, Poly, Smoothstep, Product, Sum, Derivative };

  Expr();  // Const(0)
  static Expr constant(double c);
  static Expr affine(double a, double b);
  static Expr sine_mode(double amplitude, int k, double length = 1.0);
  static Expr poly(std::vector<double> coefficients);
  static Expr smoothstep(double lo, double hi, int smoothness = 2);
  static Expr product(const Expr& lhs, const Expr& rhs);
  static Expr sum(const Expr& lhs, const Expr& rhs);
  static Expr derivative(const Expr& inner, int order);

  static Expr parse(std::string_view text);

  double operator()(double x) const { return eval(x, 0); }
  double eval(double x, int order) const;

  Kind kind() const;
  bool is_zero() const;
  std::string str() const;

  // Binds the period length of every SineMode leaf.
  Expr with_length(double length) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator*(const Expr& lhs, const Expr& rhs);
Expr operator+(const Expr& lhs, const Expr& rhs);

// Space-time scalar field as a sum of separable terms time(t) * space(x).
class SpaceTimeField {
 public:
  struct Term {
    Expr time;
    Expr space;
  };

  SpaceTimeField() = default;
  explicit SpaceTimeField(std::vector<Term> terms);
  static SpaceTimeField zero() { return {}; }
  static SpaceTimeField spatial(const Expr& space);
  static SpaceTimeField separable(const Expr& time, const Expr& space);

  // Syntax: Zero | <Expr> | Separable(<Expr>, <Expr>), joined by '+'.
  static SpaceTimeField parse(std::string_view text);

  double operator()(double t, double x) const { return eval(t, x, 0, 0); }
  double eval(double t, double x, int t_order, int x_order) const;
  bool is_zero() const;
  std::string str() const;
  SpaceTimeField with_length(double length) const;
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

// Splits "a, b(c, d), e" at top-level commas.
std::vector<std::string> split_top_level(std::string_view text, char sep);
double parse_number(std::string_view text);
int parse_int(std::string_view text);

}  // namespace movwave
