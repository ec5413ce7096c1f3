#include "movwave/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "movwave/error.hpp"

namespace movwave {

struct Expr::Node {
  Kind kind = Kind::Const;
  std::vector<double> p;  // numeric parameters
  int k = 0;              // SineMode wavenumber or derivative order
  double length = 1.0;    // SineMode period length
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double poly_derivative(const std::vector<double>& c, double x, int order) {
  double acc = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= order; --i) {
    double factor = 1.0;
    for (int j = 0; j < order; ++j) factor *= static_cast<double>(i - j);
    acc = acc * x + factor * c[static_cast<std::size_t>(i)];
  }
  return acc;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->p = {c};
  return Expr(n);
}

Expr Expr::affine(double a, double b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Affine;
  n->p = {a, b};
  return Expr(n);
}

Expr Expr::sine_mode(double amplitude, int k, double length) {
  if (!(length > 0.0)) throw Error(Errc::InvalidArgument, "SineMode length must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::SineMode;
  n->p = {amplitude};
  n->k = k;
  n->length = length;
  return Expr(n);
}

Expr Expr::poly(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Poly;
  n->p = std::move(coefficients);
  return Expr(n);
}

Expr Expr::smoothstep(double lo, double hi, int smoothness) {
  if (!(hi > lo)) throw Error(Errc::InvalidArgument, "Smoothstep requires lo < hi");
  if (smoothness < 1 || smoothness > 8) throw Error(Errc::InvalidArgument, "Smoothstep order must be in 1..8");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Smoothstep;
  n->k = smoothness;
  n->p = {lo, hi};
  // s^(N+1) sum_k C(N+k, k) C(2N+1, N-k) (-s)^k
  n->p.resize(2 + 2 * static_cast<std::size_t>(smoothness) + 2, 0.0);
  for (int k = 0; k <= smoothness; ++k)
    n->p[2 + static_cast<std::size_t>(smoothness + 1 + k)] =
        binomial(smoothness + k, k) * binomial(2 * smoothness + 1, smoothness - k) * (k % 2 ? -1.0 : 1.0);
  return Expr(n);
}

Expr Expr::product(const Expr& lhs, const Expr& rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return Expr(n);
}

Expr Expr::sum(const Expr& lhs, const Expr& rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return Expr(n);
}

Expr Expr::derivative(const Expr& inner, int order) {
  if (order < 0) throw Error(Errc::InvalidArgument, "negative derivative order");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Derivative;
  n->k = order;
  n->lhs = inner.node_;
  return Expr(n);
}

Expr operator*(const Expr& lhs, const Expr& rhs) { return Expr::product(lhs, rhs); }
Expr operator+(const Expr& lhs, const Expr& rhs) { return Expr::sum(lhs, rhs); }

Expr::Kind Expr::kind() const { return node_->kind; }

double Expr::eval(double x, int order) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const:
      return order == 0 ? n.p[0] : 0.0;
    case Kind::Affine:
      if (order == 0) return n.p[0] + n.p[1] * x;
      return order == 1 ? n.p[1] : 0.0;
    case Kind::SineMode: {
      const double w = n.k * std::numbers::pi / n.length;
      return n.p[0] * std::pow(w, order) * std::sin(w * x + order * std::numbers::pi / 2.0);
    }
    case Kind::Poly:
      return poly_derivative(n.p, x, order);
    case Kind::Smoothstep: {
      const double lo = n.p[0], hi = n.p[1], w = hi - lo;
      if (x <= lo) return 0.0;
      if (x >= hi) return order == 0 ? 1.0 : 0.0;
      const std::vector<double> ramp(n.p.begin() + 2, n.p.end());
      return poly_derivative(ramp, (x - lo) / w, order) / std::pow(w, order);
    }
    case Kind::Product: {
      const Expr a(n.lhs), b(n.rhs);
      double acc = 0.0;
      for (int j = 0; j <= order; ++j) acc += binomial(order, j) * a.eval(x, j) * b.eval(x, order - j);
      return acc;
    }
    case Kind::Sum:
      return Expr(n.lhs).eval(x, order) + Expr(n.rhs).eval(x, order);
    case Kind::Derivative:
      return Expr(n.lhs).eval(x, order + n.k);
  }
  return 0.0;
}

bool Expr::is_zero() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return n.p[0] == 0.0;
    case Kind::Affine: return n.p[0] == 0.0 && n.p[1] == 0.0;
    case Kind::SineMode: return n.p[0] == 0.0 || n.k == 0;
    case Kind::Poly: return std::all_of(n.p.begin(), n.p.end(), [](double c) { return c == 0.0; });
    case Kind::Smoothstep: return false;
    case Kind::Product: return Expr(n.lhs).is_zero() || Expr(n.rhs).is_zero();
    case Kind::Sum: return Expr(n.lhs).is_zero() && Expr(n.rhs).is_zero();
    case Kind::Derivative: return Expr(n.lhs).is_zero();
  }
  return false;
}

std::string Expr::str() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return "Const(" + fmt(n.p[0]) + ")";
    case Kind::Affine: return "Affine(" + fmt(n.p[0]) + ", " + fmt(n.p[1]) + ")";
    case Kind::SineMode: return "SineMode(" + fmt(n.p[0]) + ", " + std::to_string(n.k) + ")";
    case Kind::Poly: {
      std::string s = "Poly(";
      for (std::size_t i = 0; i < n.p.size(); ++i) s += (i ? ", " : "") + fmt(n.p[i]);
      return s + ")";
    }
    case Kind::Smoothstep:
      return "Smoothstep(" + fmt(n.p[0]) + ", " + fmt(n.p[1]) + (n.k == 2 ? "" : ", " + std::to_string(n.k)) + ")";
    case Kind::Product: return "Product(" + Expr(n.lhs).str() + ", " + Expr(n.rhs).str() + ")";
    case Kind::Sum: return "Sum(" + Expr(n.lhs).str() + ", " + Expr(n.rhs).str() + ")";
    case Kind::Derivative: return "Derivative(" + Expr(n.lhs).str() + ", " + std::to_string(n.k) + ")";
  }
  return {};
}

Expr Expr::with_length(double length) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::SineMode: return sine_mode(n.p[0], n.k, length);
    case Kind::Product: return product(Expr(n.lhs).with_length(length), Expr(n.rhs).with_length(length));
    case Kind::Sum: return sum(Expr(n.lhs).with_length(length), Expr(n.rhs).with_length(length));
    case Kind::Derivative: return derivative(Expr(n.lhs).with_length(length), n.k);
    default: return *this;
  }
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw Error(Errc::TypeMismatch, "unbalanced parentheses in '" + std::string(text) + "'");
    if (c == sep && depth == 0) {
      out.emplace_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw Error(Errc::TypeMismatch, "unbalanced parentheses in '" + std::string(text) + "'");
  out.emplace_back(trim(text.substr(start)));
  return out;
}

double parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error(Errc::TypeMismatch, "empty number");
  if (text.front() == '-') return -parse_number(text.substr(1));
  if (text.front() == '+') return parse_number(text.substr(1));
  if (text == "pi") return std::numbers::pi;
  if (text.starts_with("sqrt(") && text.back() == ')') {
    const double v = parse_number(text.substr(5, text.size() - 6));
    if (v < 0.0) throw Error(Errc::TypeMismatch, "sqrt of negative number");
    return std::sqrt(v);
  }
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw Error(Errc::TypeMismatch, "not a finite number: '" + std::string(text) + "'");
  return value;
}

namespace {

struct Call {
  std::string name;
  std::vector<std::string> args;
};

Call parse_call(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')')
    throw Error(Errc::TypeMismatch, "expected Name(args): '" + std::string(text) + "'");
  Call c;
  c.name = std::string(trim(text.substr(0, open)));
  const auto inner = text.substr(open + 1, text.size() - open - 2);
  if (!trim(inner).empty()) c.args = split_top_level(inner, ',');
  return c;
}

void expect_args(const Call& c, std::size_t n) {
  if (c.args.size() != n)
    throw Error(Errc::TypeMismatch, c.name + " expects " + std::to_string(n) + " arguments");
}

}  // namespace

int parse_int(std::string_view s) {
  const double v = parse_number(s);
  if (v != std::floor(v) || std::abs(v) > 1e6) throw Error(Errc::TypeMismatch, "expected integer: '" + std::string(s) + "'");
  return static_cast<int>(v);
}

Expr Expr::parse(std::string_view text) {
  const Call c = parse_call(text);
  if (c.name == "Const") {
    expect_args(c, 1);
    return constant(parse_number(c.args[0]));
  }
  if (c.name == "Affine") {
    expect_args(c, 2);
    return affine(parse_number(c.args[0]), parse_number(c.args[1]));
  }
  if (c.name == "SineMode") {
    expect_args(c, 2);
    return sine_mode(parse_number(c.args[0]), parse_int(c.args[1]));
  }
  if (c.name == "Poly") {
    if (c.args.empty()) throw Error(Errc::TypeMismatch, "Poly needs coefficients");
    std::vector<double> coeffs;
    for (const auto& a : c.args) coeffs.push_back(parse_number(a));
    return poly(std::move(coeffs));
  }
  if (c.name == "Smoothstep") {
    if (c.args.size() != 2 && c.args.size() != 3)
      throw Error(Errc::TypeMismatch, "Smoothstep expects 2 or 3 arguments");
    return smoothstep(parse_number(c.args[0]), parse_number(c.args[1]), c.args.size() == 3 ? parse_int(c.args[2]) : 2);
  }
  if (c.name == "Product") {
    expect_args(c, 2);
    return product(parse(c.args[0]), parse(c.args[1]));
  }
  if (c.name == "Sum") {
    expect_args(c, 2);
    return sum(parse(c.args[0]), parse(c.args[1]));
  }
  if (c.name == "Derivative") {
    expect_args(c, 2);
    return derivative(parse(c.args[0]), parse_int(c.args[1]));
  }
  throw Error(Errc::TypeMismatch, "unknown expression '" + c.name + "'");
}

SpaceTimeField::SpaceTimeField(std::vector<Term> terms) : terms_(std::move(terms)) {}

SpaceTimeField SpaceTimeField::spatial(const Expr& space) { return separable(Expr::constant(1.0), space); }

SpaceTimeField SpaceTimeField::separable(const Expr& time, const Expr& space) {
  return SpaceTimeField({Term{time, space}});
}

SpaceTimeField SpaceTimeField::parse(std::string_view text) {
  std::vector<Term> terms;
  for (const auto& part : split_top_level(text, '+')) {
    if (part == "Zero" || part == "0") continue;
    if (part.starts_with("Separable")) {
      const Call c = parse_call(part);
      expect_args(c, 2);
      terms.push_back({Expr::parse(c.args[0]), Expr::parse(c.args[1])});
    } else {
      terms.push_back({Expr::constant(1.0), Expr::parse(part)});
    }
  }
  return SpaceTimeField(std::move(terms));
}

double SpaceTimeField::eval(double t, double x, int t_order, int x_order) const {
  double acc = 0.0;
  for (const auto& term : terms_) acc += term.time.eval(t, t_order) * term.space.eval(x, x_order);
  return acc;
}

bool SpaceTimeField::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.time.is_zero() || t.space.is_zero(); });
}

std::string SpaceTimeField::str() const {
  if (terms_.empty()) return "Zero";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += " + ";
    s += "Separable(" + terms_[i].time.str() + ", " + terms_[i].space.str() + ")";
  }
  return s;
}

SpaceTimeField SpaceTimeField::with_length(double length) const {
  std::vector<Term> out;
  for (const auto& t : terms_) out.push_back({t.time, t.space.with_length(length)});
  return SpaceTimeField(std::move(out));
}

}  // namespace movwave
