#include <doctest.h>

#include <cmath>

#include "lagvac/eos.hpp"
#include "lagvac/error.hpp"

using namespace lagvac;

namespace {

// Plain bisection on rho = N + eps^2 N^gamma, the oracle for the Newton inversion.
double bisect_N(double rho, double gamma, double eps) {
  double lo = 0.0, hi = rho;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid + eps * eps * std::pow(mid, gamma) < rho ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("parameters are validated and alpha derived") {
  const ThermoParams p = ThermoParams::make(1.5, 0.2);
  CHECK(p.alpha == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_FALSE(p.outside_analysed_range());
  CHECK(ThermoParams::make(2.5, 0.0).outside_analysed_range());
  CHECK_THROWS_AS(ThermoParams::make(1.0, 0.0), Error);
  CHECK_THROWS_AS(ThermoParams::make(3.5, 0.0), Error);
  CHECK_THROWS_AS(ThermoParams::make(2.0, -0.1), Error);
}

TEST_CASE("closed-form thermodynamics") {
  const ThermoParams p = ThermoParams::make(2.0, 0.5);
  const ThermoPoint t = thermo_point(0.7, p);
  CHECK(t.p == doctest::Approx(0.49));
  CHECK(t.rho == doctest::Approx(0.7 + 0.25 * 0.49));
  CHECK(t.h == doctest::Approx(2.0 * 0.7));
  CHECK(t.csq == doctest::Approx(1.4 / (1.0 + 0.25 * 1.4)));
}

TEST_CASE("energy density inversion against bisection") {
  for (double g : {1.5, 2.0, 3.0})
    for (double e : {0.0, 1.0})
      for (double rho : {1e-8, 0.013, 1.3, 250.0}) {
        const ThermoParams p = ThermoParams::make(g, e);
        CHECK(number_density_from_energy_density(rho, p) == doctest::Approx(bisect_N(rho, g, e)).epsilon(1e-12));
      }
  // frozen: rho = 1.3, eps = 1, gamma = 1.5
  CHECK(number_density_from_energy_density(1.3, ThermoParams::make(1.5, 1.0)) ==
        doctest::Approx(bisect_N(1.3, 1.5, 1.0)).epsilon(1e-14));
  CHECK(number_density_from_energy_density(0.0, ThermoParams::make(2.0, 1.0)) == 0.0);
}

TEST_CASE("sound speed stays below light speed and fails at vacuum") {
  const ThermoParams p = ThermoParams::make(2.0, 1.0);
  CHECK(sound_speed_sq(1e6, p) < 1.0);
  CHECK_THROWS_AS(sound_speed_sq(0.0, p), Error);
}

TEST_CASE("Lorentz factor") {
  const ThermoParams p = ThermoParams::make(2.0, 0.5);
  CHECK(lorentz_factor(Vec3{0.6, 0.8, 0.0}, p) == doctest::Approx(1.0 / std::sqrt(0.75)));
  CHECK(lorentz_factor(Vec3{3.0, 0.0, 0.0}, ThermoParams::make(2.0, 0.0)) == 1.0);
  CHECK_THROWS_AS(lorentz_factor(Vec3{2.0, 0.0, 0.0}, p), Error);
}

TEST_CASE("non-relativistic energy pair") {
  const ThermoParams p = ThermoParams::make(2.0, 0.0);
  const Vec3 v{0.3, -0.1, 0.2};
  const double rho = 0.8;
  const EnergyPair e = energy_pair(rho, v, p);
  // rho |v|^2 / 2 + rho int_0^rho s^2 / s^2 ds
  CHECK(e.V == doctest::Approx(0.5 * rho * 0.14 + rho * rho));
  for (int i = 0; i < 3; ++i) CHECK(e.H[i] == doctest::Approx(v[i] * (e.V + rho * rho)));
}

TEST_CASE("energy-pair density agrees with the EOS only for gamma = 2") {
  const ThermoParams p2 = ThermoParams::make(2.0, 0.7);
  CHECK(number_density_consistency_ratio(0.2, p2) ==
        doctest::Approx(number_density_consistency_ratio(5.0, p2)).epsilon(1e-8));
  const ThermoParams p15 = ThermoParams::make(1.5, 0.7);
  CHECK(std::abs(number_density_consistency_ratio(0.2, p15) / number_density_consistency_ratio(5.0, p15) - 1.0) > 1e-4);
}
