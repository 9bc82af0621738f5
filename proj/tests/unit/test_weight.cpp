#include <doctest.h>

#include <cmath>

#include "lagvac/weight.hpp"

using namespace lagvac;

namespace {

// Composite Simpson on [0, 1], the oracle for the trapezoid-based norms.
template <class F>
double simpson(F&& f, int n = 2000) {
  const double h = 1.0 / n;
  double s = f(0.0) + f(1.0);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("parabolic weight constants and analytic derivatives") {
  const GridSpec g = GridSpec::planar(33);
  const WeightField w = make_weight(WeightProfile::parabolic(), g);
  CHECK(w.c_lower == doctest::Approx(0.5));
  CHECK(w.c_upper == doctest::Approx(1.0));
  CHECK(w.w(0, 0) == 0.0);
  CHECK(w.w(0, 32) == 0.0);
  const ScalarField d2 = w.derivative({0, 0, 2});
  for (std::size_t n = 0; n < g.size(); ++n) CHECK(d2(0, n) == -2.0);
  CHECK(w.derivative({0, 0, 3})(0, 5) == 0.0);
  CHECK_THROWS_AS(w.derivative({0, 0, 13}), Error);
}

TEST_CASE("invalid weights are rejected") {
  const GridSpec g = GridSpec::planar(33);
  CHECK_THROWS_AS(make_weight(WeightProfile::from_expression("x3^2*(1-x3)"), g), Error);
  CHECK_THROWS_AS(make_weight(WeightProfile::from_expression("1 + x3"), g), Error);
  CHECK_THROWS_AS(WeightProfile::from_expression("t*x3*(1-x3)"), Error);
}

TEST_CASE("sine weight") {
  const GridSpec g = GridSpec::planar(65);
  const WeightField w = make_weight(WeightProfile::from_expression("sin(pi*x3)"), g);
  CHECK(w.c_lower == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(w.c_upper == doctest::Approx(3.14159265).epsilon(1e-6));
}

TEST_CASE("weight norms against Simpson") {
  const GridSpec g = GridSpec::planar(513);
  const WeightField w = make_weight(WeightProfile::parabolic(), g);
  const double alpha = 2.0;
  const WeightNorms n = weight_norms(w, 1, alpha);
  // |m| + n <= 1 in planar symmetry: n = 0 and n = 1 terms
  const double oracle = simpson([&](double x) {
    const double wx = x * (1 - x), dw = 1 - 2 * x;
    return std::pow(wx, alpha + 1) * wx * wx + std::pow(wx, alpha + 2) * dw * dw;
  });
  CHECK(n.F == doctest::Approx(oracle).epsilon(1e-5));
  const double oracle_I = simpson([&](double x) {
    const double wx = x * (1 - x), dw = 1 - 2 * x;
    return std::pow(wx, alpha + 1) * dw * dw + std::pow(wx, alpha + 2) * 4.0;
  });
  CHECK(n.F_I == doctest::Approx(oracle_I).epsilon(1e-5));
}
