#pragma once

#include "lagvac/eos.hpp"
#include "lagvac/kinematics.hpp"
#include "lagvac/weight.hpp"

namespace lagvac {

/// Coefficients of the second-order Lagrangian system at one instant.
struct CoefficientData {
  TensorField B;    // symmetric, B^j_i at i*3 + j
  Tensor3Field C;   // C^k_ij at k*9 + i*3 + j, symmetric in (i, j)
  VectorField chi;  // modified velocity (1 + eps^2 h) Gamma eta_t
  ScalarField h;    // enthalpy (1 + alpha) w (Gamma J)^(-1/alpha)
  ScalarField Gamma;
};

/// Lorentz factor of eta_t at every node; NodeError(superluminal) at the
/// first node with eps |eta_t| >= 1.
ScalarField lorentz_field(const VectorField& v, const ThermoParams& params);

CoefficientData assemble_coefficients(const FlowState& state, const DeformationData& defo, const WeightField& w,
                                      const ThermoParams& params, Exec exec = Exec::parallel);

/// R_j = w^a B^j_i eta_tt^i + w^(1+a) C^k_ij d_k eta_t^i + d_k(w^(1+a) A^k_j J^(-1/a)),
/// the last term differenced as a whole.
VectorField system_residual(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                            const WeightField& w, const ThermoParams& params, Exec exec = Exec::parallel);

/// The pressure flux w^(1+a) A^k_j J^(-1/a) at k*3 + j.
TensorField pressure_flux(const DeformationData& defo, const WeightField& w, const ThermoParams& params,
                          Exec exec = Exec::parallel);

/// d_t chi expanded analytically from eta_tt.
VectorField chi_rate(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                     const ThermoParams& params, Exec exec = Exec::parallel);

/// Gamma d_t chi^j + A^k_j d_k h with d_t chi from `chi_rate`.
VectorField chi_h_residual(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                           const ThermoParams& params, Exec exec = Exec::parallel);

/// Same, with d_t chi supplied by the caller (e.g. a time difference).
VectorField chi_h_residual(const VectorField& chi_t, const DeformationData& defo, const CoefficientData& coeffs,
                           Exec exec = Exec::parallel);

/// d_l(A^k_i J^(-1/a)) minus its expansion
/// -(1+1/a) J^(-1/a) A^k_i div_eta(d_l eta) + J^(-1/a)(A^k_i A^s_r - A^k_r A^s_i) d_s d_l eta^r,
/// stored at k*3 + i.
TensorField structure_identity_residual(const DeformationData& defo, int l, const ThermoParams& params,
                                        Exec exec = Exec::parallel);

/// Max-node |N Gamma J - w^a| with N recovered through the energy density.
double number_density_defect(const FlowState& state, const DeformationData& defo, const WeightField& w,
                             const ThermoParams& params);

/// J^(-1/alpha) via the logarithm.
inline double jacobian_power(double J, double alpha) { return std::exp(-std::log(J) / alpha); }

}  // namespace lagvac
