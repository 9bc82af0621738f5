#include <doctest.h>

#include <cmath>

#include "lagvac/kinematics.hpp"
#include "lagvac/verify.hpp"

using namespace lagvac;

namespace {

VectorField linear_map(const GridSpec& g, const Mat3& L) {
  VectorField eta(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto x = g.position(n);
    eta.set(n, {L[0] * x[0] + L[1] * x[1] + L[2] * x[2], L[3] * x[0] + L[4] * x[1] + L[5] * x[2],
                L[6] * x[0] + L[7] * x[1] + L[8] * x[2]});
  }
  return eta;
}

}  // namespace

TEST_CASE("identity map") {
  const GridSpec g = GridSpec::slab(8, 8, 9);
  const DeformationData d = compute_deformation(FlowState::identity(g));
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(d.J(0, n) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mat3::max_abs_diff(d.A.at(n), mat3::identity()) < 1e-14);
  }
  CHECK(max_norm(piola_residual(d)) < 1e-12);
}

TEST_CASE("shear map with unit winding") {
  const GridSpec g = GridSpec::slab(8, 8, 9);
  const Mat3 L{1, 0, 0.3, 0, 1, -0.2, 0, 0, 1.5};
  const DeformationData d = compute_deformation(linear_map(g, L));
  const Mat3 Ainv = mat3::inverse(L, mat3::det(L));
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(d.J(0, n) == doctest::Approx(1.5));
    CHECK(mat3::max_abs_diff(d.A.at(n), Ainv) < 1e-12);
  }
}

TEST_CASE("orientation reversal is reported with the node") {
  const GridSpec g = GridSpec::planar(9);
  VectorField eta(g);
  for (std::size_t n = 0; n < g.size(); ++n) eta.set(n, {0.0, 0.0, 1.0 - g.position(n)[2]});
  CHECK_THROWS_AS(compute_deformation(eta), NodeError);
}

TEST_CASE("curl of a Lie gradient field vanishes for linear data") {
  const GridSpec g = GridSpec::slab(8, 8, 9);
  const Mat3 L{1.2, 0.1, 0, 0, 0.9, 0.2, 0, 0, 1.1};
  const DeformationData d = compute_deformation(linear_map(g, L));
  // F = grad_eta of f = eta1 + 2 eta3 is the constant (1, 0, 2)
  VectorField F(g);
  for (std::size_t n = 0; n < g.size(); ++n) F.set(n, {1.0, 0.0, 2.0});
  const LieDerivatives ld = lie_gradient(F, d);
  CHECK(max_norm(ld.curl) == 0.0);
}

TEST_CASE("Curl matrix norm is twice the curl vector norm") {
  CHECK(verify::curl_norm_identity_defect(32) < 1e-12);
}

TEST_CASE("rate identities require a uniform path") {
  const GridSpec g = GridSpec::planar(9);
  std::vector<FlowState> path(3, FlowState::identity(g));
  path[1].time = 0.1;
  path[2].time = 0.3;
  CHECK_THROWS_AS(verify_rate_identities(path), Error);
}
