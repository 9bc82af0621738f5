#include <doctest.h>

#include <cmath>

#include "lagvac/error.hpp"
#include "lagvac/expr.hpp"

using lagvac::Expression;
using V = Expression::Var;

TEST_CASE("parsing and evaluation") {
  const Expression e = Expression::parse("2*x3*(1-x3) + sin(pi*x1)^2 - t/4");
  CHECK(e(0.5, 0.0, 0.25, 1.0) == doctest::Approx(2 * 0.25 * 0.75 + 1.0 - 0.25));
  CHECK(Expression::parse("2^3^2")(0, 0, 0) == 512.0);
  CHECK(Expression::parse("-x3^2")(0, 0, 3) == -9.0);
  CHECK_THROWS_AS(Expression::parse("x3 +"), lagvac::Error);
  CHECK_THROWS_AS(Expression::parse("foo(x3)"), lagvac::Error);
}

TEST_CASE("symbolic derivatives") {
  const Expression e = Expression::parse("x3*(1-x3)*exp(t)");
  CHECK(e.derivative(V::x3)(0, 0, 0.2, 0.0) == doctest::Approx(0.6));
  CHECK(e.derivative(V::x3, 2)(0, 0, 0.7, 0.0) == doctest::Approx(-2.0));
  CHECK(e.derivative(V::x3, 3).is_constant());
  CHECK(e.derivative(V::t)(0, 0, 0.5, 1.0) == doctest::Approx(0.25 * std::exp(1.0)));
  CHECK_FALSE(e.depends_on(V::x1));
  const Expression s = Expression::parse("sqrt(x1)*log(x2)");
  CHECK(s.derivative(V::x1)(4.0, std::exp(1.0), 0) == doctest::Approx(0.25));
  CHECK(s.derivative(V::x2)(4.0, 2.0, 0) == doctest::Approx(1.0));
}
