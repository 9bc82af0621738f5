#include <doctest.h>

#include <cmath>

#include "lagvac/dynamics.hpp"
#include "lagvac/verify.hpp"

using namespace lagvac;

namespace {

struct Setup {
  GridSpec grid;
  WeightField w;
  FlowState state;
};

Setup planar_motion(std::size_t n3, double speed) {
  Setup s{GridSpec::planar(n3), {}, {}};
  s.w = make_weight(WeightProfile::parabolic(), s.grid);
  s.state = FlowState::identity(s.grid);
  s.state.eta_tt = VectorField(s.grid);
  for (std::size_t n = 0; n < s.grid.size(); ++n) {
    const double x = s.grid.position(n)[2];
    s.state.eta(2, n) = x + 0.1 * x * (1 - x);
    s.state.eta_t(2, n) = speed * std::sin(3.141592653589793 * x);
    (*s.state.eta_tt)(2, n) = -x;
  }
  return s;
}

}  // namespace

TEST_CASE("planar B and C against closed forms") {
  const Setup s = planar_motion(33, 0.6);
  const ThermoParams p = ThermoParams::make(1.5, 0.8);
  const DeformationData d = compute_deformation(s.state);
  const CoefficientData c = assemble_coefficients(s.state, d, s.w, p);
  for (std::size_t n = 1; n + 1 < s.grid.size(); n += 4) {
    const double v = s.state.eta_t(2, n);
    const double G = 1.0 / std::sqrt(1.0 - p.eps2() * v * v);
    CHECK(c.Gamma(0, n) == doctest::Approx(G).epsilon(1e-14));
    const double J = d.J(0, n);
    const double h = (1.0 + p.alpha) * s.w.w(0, n) * std::pow(G * J, -1.0 / p.alpha);
    CHECK(c.h(0, n) == doctest::Approx(h).epsilon(1e-13));
    CHECK(c.chi(2, n) == doctest::Approx((1.0 + p.eps2() * h) * G * v).epsilon(1e-13));
    CHECK(c.B(0, n) == doctest::Approx(c.B(4, n)));
    CHECK(c.B(1, n) == 0.0);
    CHECK(c.B(8, n) > c.B(0, n));
  }
}

TEST_CASE("superluminal velocity is rejected") {
  Setup s = planar_motion(17, 0.6);
  s.state.eta_t(2, 8) = 2.5;
  const ThermoParams p = ThermoParams::make(2.0, 0.5);
  CHECK_THROWS_AS(lorentz_field(s.state.eta_t, p), NodeError);
}

TEST_CASE("static residual at n3 = 257") {
  const GridSpec g = GridSpec::planar(257);
  FlowState s = FlowState::identity(g);
  s.eta_tt = VectorField(g);
  const WeightField w = make_weight(WeightProfile::parabolic(), g);
  const ThermoParams p = ThermoParams::make(2.0, 0.0);
  const DeformationData d = compute_deformation(s);
  const VectorField R = system_residual(s, d, assemble_coefficients(s, d, w, p), w, p);
  double err = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double x = g.position(n)[2];
    err = std::max(err, std::abs(R(2, n) - 2.0 * x * (1 - x) * (1 - 2 * x)));
  }
  CHECK(err < 1e-4);
}

TEST_CASE("number density recovers w^alpha") {
  const Setup s = planar_motion(65, 0.5);
  const ThermoParams p = ThermoParams::make(1.5, 0.6);
  const DeformationData d = compute_deformation(s.state);
  CHECK(number_density_defect(s.state, d, s.w, p) < 1e-12);
}

TEST_CASE("jacobian power") {
  CHECK(jacobian_power(8.0, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(jacobian_power(1.0, 0.7) == 1.0);
}

TEST_CASE("structure identity converges") {
  const auto s = verify::structure_identity_study({64, 128}, 1.0);
  CHECK(s.error[1] < s.error[0] / 3.0);
}
