#include <doctest.h>

#include <cmath>

#include "lagvac/energy.hpp"

using namespace lagvac;

namespace {

EnergyReport identity_report(std::size_t n3, int N, double gamma = 2.0) {
  const GridSpec g = GridSpec::planar(n3);
  FlowState s = FlowState::identity(g);
  s.eta_tt = VectorField(g);
  const ThermoParams p = ThermoParams::make(gamma, 0.0);
  const WeightField w = make_weight(WeightProfile::parabolic(), g);
  const DeformationData d = compute_deformation(s);
  const CoefficientData c = assemble_coefficients(s, d, w, p);
  const CurlStructure cs = assemble_curl_structure(s, d, c, p);
  return energy_functionals(s, d, c, cs, w, p, N);
}

}  // namespace

TEST_CASE("identity state values") {
  const EnergyReport r = identity_report(256, 2);
  CHECK(r.term(0, 0, 0).E_II == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(r.term(0, 0, 0).E_III == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(r.term(0, 0, 0).E_I == 0.0);
  // d3 of the identity is constant, so every higher normal term vanishes
  CHECK(r.term(0, 0, 1).E_II == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.term(1, 0, 0).E_III == 0.0);
  CHECK(r.E_total == doctest::Approx(r.E_I + r.E_III + r.E_IV));
  CHECK(r.full_order == 11.0);
  CHECK_THROWS_AS(r.term(5, 0, 0), Error);
}

TEST_CASE("diagnostic order and stencil rules") {
  CHECK(default_diagnostic_order(1.0, GridSpec::planar(64)) == 8);
  CHECK(default_diagnostic_order(2.0, GridSpec::slab(8, 8, 16)) == 4);
  CHECK_NOTHROW(require_stencil(GridSpec::slab(9, 9, 9), {4, 0, 0}));
  CHECK_THROWS_AS(require_stencil(GridSpec::slab(8, 8, 9), {4, 0, 0}), Error);
}

TEST_CASE("Hardy exact cases") {
  const auto one = SampledFunction::sample([](double) { return 1.0; }, [](double) { return 0.0; });
  const HardyResult r = hardy_check(one, 2.0);
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // k = 3 with g = s: int s^3 against int s^3 (s^2 + 1) = 1/4 / (1/6 + 1/4)
  const auto lin = SampledFunction::sample([](double s) { return s; }, [](double) { return 1.0; });
  const HardyResult r3 = hardy_check(lin, 3.0);
  CHECK(r3.ratio == doctest::Approx(0.25 / (1.0 / 6.0 + 0.25)).epsilon(1e-12));
  CHECK_THROWS_AS(hardy_check(one, 1.0), Error);
}

TEST_CASE("weighted norm of a constant") {
  const GridSpec g = GridSpec::planar(513);
  const WeightField w = make_weight(WeightProfile::parabolic(), g);
  const DeformationData d = compute_deformation(FlowState::identity(g));
  const WeightedNorms n = weighted_space_norms(ScalarField(g, 1.0), w, d, 1.0, 0);
  CHECK(n.X * n.X == doctest::Approx(1.0 / 6.0).epsilon(1e-5));
}

TEST_CASE("energy monitor majorant") {
  EnergyInequalityMonitor mon(1.0);
  mon.set_majorant(2.0, 1.5);
  CHECK(mon.bound(3.0) == doctest::Approx(16.0));
  CHECK(mon.calibrated());
}
