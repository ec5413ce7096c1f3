#include <cmath>

#include "doctest.h"
#include "movwave/error.hpp"
#include "movwave/expr.hpp"

using namespace movwave;

TEST_CASE("catalog expressions evaluate with derivatives") {
  const Expr a = Expr::parse("Affine(2, -2)");
  CHECK(a(0.25) == doctest::Approx(1.5));
  CHECK(a.eval(0.25, 1) == doctest::Approx(-2.0));
  CHECK(a.eval(0.25, 2) == 0.0);

  const Expr s = Expr::parse("SineMode(1.5, 2)");
  CHECK(s(0.125) == doctest::Approx(1.5 * std::sin(M_PI / 4)));
  CHECK(s.eval(0.125, 1) == doctest::Approx(1.5 * 2 * M_PI * std::cos(M_PI / 4)));
  CHECK(s.with_length(2.0)(0.25) == doctest::Approx(1.5 * std::sin(M_PI / 4)));

  const Expr p = Expr::parse("Poly(1, 0, 3)");
  CHECK(p(2.0) == doctest::Approx(13.0));
  CHECK(p.eval(2.0, 1) == doctest::Approx(12.0));

  CHECK(Expr::parse("Const(sqrt(2))")(7.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(Expr::parse("Product(Affine(0, 1), Affine(0, 1))").eval(3.0, 1) == doctest::Approx(6.0));
  CHECK(Expr::parse("Derivative(Poly(0, 0, 0, 1), 2)")(2.0) == doctest::Approx(12.0));
}

TEST_CASE("smoothstep ramps are C^N") {
  for (int n = 1; n <= 8; ++n) {
    const Expr s = Expr::smoothstep(0.0, 1.0, n);
    CHECK(s(0.0) == 0.0);
    CHECK(s(1.0) == doctest::Approx(1.0));
    CHECK(s(0.5) == doctest::Approx(0.5));
    for (int k = 1; k <= n; ++k) {
      CHECK(std::abs(s.eval(0.0, k)) <= 1e-9);
      CHECK(std::abs(s.eval(1.0, k)) <= 1e-9);
    }
    CHECK(s(-1.0) == 0.0);
    CHECK(s(2.0) == 1.0);
  }
  CHECK(Expr::smoothstep(0.0, 1.0)(0.3) == doctest::Approx(0.3 * 0.3 * 0.3 * (10 - 15 * 0.3 + 6 * 0.09)));
}

TEST_CASE("expressions round-trip through str") {
  for (const char* text : {"Const(1)", "Affine(2, -2)", "SineMode(1, 3)", "Poly(1, 2, 3)", "Smoothstep(0, 0.1)",
                           "Smoothstep(0, 1, 4)", "Product(Const(-1), Smoothstep(0, 1))", "Sum(Const(1), Affine(0, 1))",
                           "Derivative(SineMode(1, 1), 1)"}) {
    const Expr e = Expr::parse(text);
    const Expr again = Expr::parse(e.str());
    for (double x : {0.0, 0.05, 0.3, 0.77})
      CHECK(again.eval(x, 1) == doctest::Approx(e.eval(x, 1)).epsilon(1e-15));
  }
}

TEST_CASE("space-time fields") {
  const auto f = SpaceTimeField::parse("Separable(Affine(2, sqrt(2)), Const(1)) + Affine(0, 1)");
  CHECK(f(1.0, 0.5) == doctest::Approx(2.0 + std::sqrt(2.0) + 0.5));
  CHECK(f.eval(1.0, 0.5, 1, 0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(f.eval(1.0, 0.5, 0, 1) == doctest::Approx(1.0));
  CHECK(SpaceTimeField::parse("Zero").is_zero());
  CHECK(SpaceTimeField::parse(f.str())(0.3, 0.2) == doctest::Approx(f(0.3, 0.2)));
}

TEST_CASE("malformed expressions are type mismatches") {
  for (const char* bad : {"Cosine(1)", "Affine(1)", "Const(", "Const(abc)", "SineMode(1, 1.5)", "Poly()"}) {
    try {
      (void)Expr::parse(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::TypeMismatch);
    }
  }
  CHECK(parse_int("12") == 12);
  CHECK_THROWS_AS(parse_int("1.5"), Error);
  CHECK(split_top_level("a, b(c, d), e", ',').size() == 3);
}
