#pragma once

#include <optional>
#include <span>

#include "lagvac/dynamics.hpp"

namespace lagvac {

/// S = I + eps^2 Gamma^2 v v^T, its inverse U, and the antisymmetric R and X
/// of the relativistic curl equation, all at i*3 + j.
struct CurlStructure {
  TensorField S;
  TensorField U;
  TensorField R;
  std::optional<TensorField> X;
};

/// Pointwise ingredients of the vorticity transport law.
struct CurlSources {
  TensorField curl_chi;          // Curl_eta chi
  TensorField transport;         // [d_t, Curl_eta] chi
  TensorField gamma_commutator;  // Gamma^-1 [Curl_eta, Gamma] d_t chi
  TensorField gamma_source;      // Gamma^-1 Curl_eta(Gamma d_t chi), zero for exact solutions
};

CurlSources curl_sources(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                         const ThermoParams& params, Exec exec = Exec::parallel);

/// Trapezoid accumulators for the two history integrals defining X.
class CurlHistory {
 public:
  void reset(double t0, const CurlSources& s0);
  void advance(double t, const CurlSources& s);

  bool started() const noexcept { return started_; }
  double time() const noexcept { return time_; }
  const TensorField& initial_curl() const noexcept { return curl0_; }
  const TensorField& transport_integral() const noexcept { return transport_; }
  const TensorField& gamma_integral() const noexcept { return gamma_; }
  const TensorField& source_integral() const noexcept { return source_; }

  /// Curl chi(0) + int [d_t, Curl] chi - int Gamma^-1 [Curl, Gamma] d_t chi.
  TensorField predicted_curl() const;

 private:
  bool started_ = false;
  double time_ = 0.0;
  TensorField curl0_, transport_, gamma_, source_;
  TensorField last_transport_, last_gamma_, last_source_;
};

CurlStructure assemble_curl_structure(const FlowState& state, const DeformationData& defo,
                                      const CoefficientData& coeffs, const ThermoParams& params,
                                      const CurlHistory* history = nullptr, Exec exec = Exec::parallel);

/// U K^T - K U + U R U - U X U at i*3 + j, with K = D_eta eta_t.
TensorField curl_residual(const FlowState& state, const DeformationData& defo, const CurlStructure& cs,
                          Exec exec = Exec::parallel);

struct VorticityReport {
  double lv_defect = 0.0;         // max |Curl chi(t) - predicted|
  double kinematic_defect = 0.0;  // same with the Gamma^-1 Curl(Gamma d_t chi) source restored
  double max_curl_chi = 0.0;
  std::size_t states = 0;
};

/// Integrates the curl equation along a uniformly sampled path of states
/// carrying eta_tt and compares with Curl chi evaluated directly.
VorticityReport vorticity_transport_check(std::span<const FlowState> path, const WeightField& w,
                                          const ThermoParams& params, Exec exec = Exec::parallel);

double max_abs(const TensorField& T);

}  // namespace lagvac
