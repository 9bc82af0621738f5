#include <doctest.h>

#include <cmath>

#include "lagvac/verify.hpp"
#include "lagvac/vorticity.hpp"

using namespace lagvac;

TEST_CASE("S, U and R for a single velocity") {
  const GridSpec g = GridSpec::slab(1, 1, 5);
  FlowState s = FlowState::identity(g);
  s.eta_tt = VectorField(g);
  const Vec3 v{0.3, -0.4, 0.5};
  const Vec3 a{0.1, 0.2, -0.3};
  for (std::size_t n = 0; n < g.size(); ++n) {
    s.eta_t.set(n, v);
    s.eta_tt->set(n, a);
  }
  const ThermoParams p = ThermoParams::make(2.0, 1.2);
  const WeightField w = make_weight(WeightProfile::parabolic(), g);
  const DeformationData d = compute_deformation(s);
  const CoefficientData c = assemble_coefficients(s, d, w, p);
  const CurlStructure cs = assemble_curl_structure(s, d, c, p);
  const double G2 = 1.0 / (1.0 - 1.44 * 0.5);
  const Mat3 S = cs.S.at(2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(S[i * 3 + j] == doctest::Approx((i == j ? 1.0 : 0.0) + 1.44 * G2 * v[i] * v[j]).epsilon(1e-13));
      CHECK(cs.R(i * 3 + j, 2) == doctest::Approx(1.44 * G2 * (a[j] * v[i] - a[i] * v[j])).epsilon(1e-13));
    }
  CHECK(mat3::det(S) == doctest::Approx(G2).epsilon(1e-13));
  CHECK(mat3::max_abs_diff(mat3::mul(cs.U.at(2), S), mat3::identity()) < 1e-13);
}

TEST_CASE("det S sampling") {
  const auto r = verify::det_s_samples(2000, 7);
  CHECK(r.samples == 2000);
  CHECK(r.det_defect < 1e-12);
  CHECK(r.inverse_defect < 1e-12);
}

TEST_CASE("curl residual needs the history term") {
  const GridSpec g = GridSpec::slab(4, 4, 9);
  FlowState s = FlowState::identity(g);
  s.eta_tt = VectorField(g);
  const ThermoParams p = ThermoParams::make(2.0, 0.1);
  const WeightField w = make_weight(WeightProfile::parabolic(), g);
  const DeformationData d = compute_deformation(s);
  const CurlStructure cs = assemble_curl_structure(s, d, assemble_coefficients(s, d, w, p), p);
  CHECK_FALSE(cs.X.has_value());
  CHECK_THROWS_AS(curl_residual(s, d, cs), Error);
}

TEST_CASE("static path has no vorticity defect") {
  const GridSpec g = GridSpec::slab(6, 6, 9);
  std::vector<FlowState> path(3, FlowState::identity(g));
  for (int k = 0; k < 3; ++k) {
    path[k].eta = verify::perturbed_identity(g);
    path[k].eta_tt = VectorField(g);
    path[k].time = 0.05 * k;
  }
  const auto rep = vorticity_transport_check(path, make_weight(WeightProfile::parabolic(), g), ThermoParams::make(2.0, 0.4));
  CHECK(rep.lv_defect == 0.0);
  CHECK(rep.max_curl_chi == 0.0);
  CHECK(rep.states == 3);
}
