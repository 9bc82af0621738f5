#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lagvac/kernels.hpp"

using namespace lagvac;

TEST_CASE("second-order partials are exact on quadratics") {
  const GridSpec g = GridSpec::slab(1, 1, 9);
  std::vector<double> f(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double x = g.position(n)[2];
    f[n] = 3 * x * x - x + 1;
  }
  const auto d = kernels::partial(f, g, 2);
  for (std::size_t n = 0; n < g.size(); ++n) CHECK(d[n] == doctest::Approx(6 * g.position(n)[2] - 1).epsilon(1e-12));
  const auto z = kernels::partial(f, g, 0);
  for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("periodic partial converges at second order") {
  double err[2];
  int k = 0;
  for (std::size_t n1 : {32, 64}) {
    const GridSpec g = GridSpec::slab(n1, 1, 3);
    std::vector<double> f(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) f[n] = std::sin(2 * std::numbers::pi * g.position(n)[0]);
    const auto d = kernels::partial(f, g, 0);
    double e = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
      e = std::max(e, std::abs(d[n] - 2 * std::numbers::pi * std::cos(2 * std::numbers::pi * g.position(n)[0])));
    err[k++] = e;
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("serial and parallel paths are bitwise identical") {
  const GridSpec g = GridSpec::slab(8, 8, 17);
  VectorField F(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto x = g.position(n);
    F.set(n, {std::sin(6.28 * x[0]) * x[2], x[1] * x[2] * x[2], std::cos(x[0] + x[1]) + x[2]});
  }
  CHECK(kernels::gradient(F, Exec::serial) == kernels::gradient(F, Exec::parallel));
  CHECK(kernels::map_gradient(F, Exec::serial) == kernels::map_gradient(F, Exec::parallel));
}

TEST_CASE("trapezoid integration and weights") {
  const GridSpec g = GridSpec::planar(101);
  std::vector<double> one(g.size(), 1.0), x(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) x[n] = g.position(n)[2];
  CHECK(kernels::integrate(one, g) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kernels::integrate(x, g) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(kernels::quadrature_weight(g, 0) == doctest::Approx(0.005));
}
