#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lagvac/eos.hpp"
#include "lagvac/grid.hpp"
#include "lagvac/kernels.hpp"
#include "lagvac/mat3.hpp"

namespace lagvac {

/// Flow map and its time derivatives at one instant.
struct FlowState {
  VectorField eta;
  VectorField eta_t;
  std::optional<VectorField> eta_tt;
  double time = 0.0;

  const GridSpec& grid() const noexcept { return eta.grid(); }

  /// eta = x, eta_t = 0 on `grid`.
  static FlowState identity(const GridSpec& grid);
};

/// Deformation tensor D = grad eta (D[r*3+s] = d_s eta^r), its inverse A,
/// the Jacobian J = det D and the cofactor J A.
struct DeformationData {
  TensorField D_eta;
  TensorField A;
  ScalarField J;
  TensorField cof;

  const GridSpec& grid() const noexcept { return J.grid(); }
  Mat3 A_at(std::size_t node) const noexcept { return A.at(node); }
};

/// Throws NodeError(degenerate_map) at the first node with J <= 0.
DeformationData compute_deformation(const FlowState& state, Exec exec = Exec::parallel);
DeformationData compute_deformation(const VectorField& eta, Exec exec = Exec::parallel);

/// Lie derivatives of F along the flow map.
struct LieDerivatives {
  TensorField D;      // [D_eta F]^i_r = A^s_r F^i_s       at i*3 + r
  ScalarField div;    // A^s_r F^r_s
  VectorField curl;   // eps_ijk A^s_j F^k_s
  TensorField Curl;   // [Curl_eta F]^i_j = A^s_j F^i_s - A^s_i F^j_s
};

LieDerivatives lie_gradient(const VectorField& F, const DeformationData& defo, Exec exec = Exec::parallel);

/// Same operators from a precomputed spatial gradient G^i_s = d_s F^i.
LieDerivatives lie_gradient_from(const TensorField& G, const DeformationData& defo, Exec exec = Exec::parallel);

/// Curl_eta matrix only (cheaper than the full set).
TensorField lagrangian_curl_matrix(const TensorField& G, const DeformationData& defo, Exec exec = Exec::parallel);

/// d_k (J A^k_i), the cofactor differenced directly.
VectorField piola_residual(const DeformationData& defo, Exec exec = Exec::parallel);

/// Max-node Euclidean norm of a vector field.
double max_norm(const VectorField& v);

struct RateIdentityReport {
  double A_residual = 0.0;  // max |d_t A + A (d_t grad eta) A|
  double J_residual = 0.0;  // max |d_t J - J A^s_r d_t eta^r_s|
  std::size_t checked_states = 0;
};

/// Checks the rate identities for the inverse deformation and the Jacobian
/// along a uniformly sampled path, with d_t taken by centred time differences.
RateIdentityReport verify_rate_identities(std::span<const FlowState> path, Exec exec = Exec::parallel);

}  // namespace lagvac
