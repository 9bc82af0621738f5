#include "lagvac/vorticity.hpp"

#include <algorithm>
#include <cmath>

namespace lagvac {

namespace {

Mat3 antisym(const Mat3& M) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i * 3 + j] = M[i * 3 + j] - M[j * 3 + i];
  return out;
}

void axpy(TensorField& y, double a, const TensorField& x) {
  for (std::size_t c = 0; c < 9; ++c) {
    auto yc = y[c];
    auto xc = x[c];
    for (std::size_t n = 0; n < yc.size(); ++n) yc[n] += a * xc[n];
  }
}

}  // namespace

double max_abs(const TensorField& T) {
  double m = 0.0;
  for (std::size_t c = 0; c < 9; ++c) m = std::max(m, kernels::max_abs(T[c]));
  return m;
}

CurlSources curl_sources(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                         const ThermoParams& params, Exec exec) {
  const GridSpec& grid = defo.grid();
  const VectorField chi_t = chi_rate(state, defo, coeffs, params, exec);
  const TensorField Gchi = kernels::gradient(coeffs.chi, exec);
  const TensorField Gv = kernels::gradient(state.eta_t, exec);
  const VectorField dGamma = kernels::gradient(coeffs.Gamma, exec);

  VectorField Gchi_t(grid);
  for (int i = 0; i < 3; ++i) {
    auto out = Gchi_t[i];
    auto src = chi_t[i];
    kernels::for_each_node(exec, grid.size(), [&](std::size_t n) { out[n] = coeffs.Gamma(0, n) * src[n]; });
  }
  const TensorField G_Gchi_t = kernels::gradient(Gchi_t, exec);

  CurlSources s{lagrangian_curl_matrix(Gchi, defo, exec), TensorField(grid), TensorField(grid),
                lagrangian_curl_matrix(G_Gchi_t, defo, exec)};
  kernels::for_each_node(exec, grid.size(), [&](std::size_t n) {
    const Mat3 A = defo.A.at(n);
    const Mat3 At = mat3::mul(mat3::mul(A, Gv.at(n)), A);  // -d_t A
    Mat3 M = mat3::mul(Gchi.at(n), At);
    for (double& x : M) x = -x;
    s.transport.set(n, antisym(M));

    const double G = coeffs.Gamma(0, n);
    Vec3 dG{};
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) dG[j] += A[k * 3 + j] * dGamma(k, n);
    Mat3 C;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) C[i * 3 + j] = (chi_t(i, n) * dG[j] - chi_t(j, n) * dG[i]) / G;
    s.gamma_commutator.set(n, C);
    Mat3 Q = s.gamma_source.at(n);
    for (double& x : Q) x /= G;
    s.gamma_source.set(n, Q);
  });
  return s;
}

void CurlHistory::reset(double t0, const CurlSources& s0) {
  const GridSpec& grid = s0.curl_chi.grid();
  started_ = true;
  time_ = t0;
  curl0_ = s0.curl_chi;
  transport_ = TensorField(grid);
  gamma_ = TensorField(grid);
  source_ = TensorField(grid);
  last_transport_ = s0.transport;
  last_gamma_ = s0.gamma_commutator;
  last_source_ = s0.gamma_source;
}

void CurlHistory::advance(double t, const CurlSources& s) {
  if (!started_) fail(ErrorKind::invalid_input, "curl history advanced before reset");
  const double dt = t - time_;
  if (!(dt > 0.0)) fail(ErrorKind::invalid_input, "curl history times must increase");
  axpy(transport_, 0.5 * dt, last_transport_);
  axpy(transport_, 0.5 * dt, s.transport);
  axpy(gamma_, 0.5 * dt, last_gamma_);
  axpy(gamma_, 0.5 * dt, s.gamma_commutator);
  axpy(source_, 0.5 * dt, last_source_);
  axpy(source_, 0.5 * dt, s.gamma_source);
  last_transport_ = s.transport;
  last_gamma_ = s.gamma_commutator;
  last_source_ = s.gamma_source;
  time_ = t;
}

TensorField CurlHistory::predicted_curl() const {
  TensorField out = curl0_;
  axpy(out, 1.0, transport_);
  axpy(out, -1.0, gamma_);
  return out;
}

CurlStructure assemble_curl_structure(const FlowState& state, const DeformationData& defo,
                                      const CoefficientData& coeffs, const ThermoParams& params,
                                      const CurlHistory* history, Exec exec) {
  if (!state.eta_tt) fail(ErrorKind::invalid_input, "curl structure needs eta_tt for R");
  const GridSpec& grid = defo.grid();
  const double eps2 = params.eps2();
  CurlStructure cs{TensorField(grid), TensorField(grid), TensorField(grid), std::nullopt};
  kernels::for_each_node(exec, grid.size(), [&](std::size_t n) {
    const Vec3 v = state.eta_t.at(n);
    const Vec3 a = state.eta_tt->at(n);
    const double G = coeffs.Gamma(0, n);
    const double k = eps2 * G * G;
    const double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    const double sm = k / (1.0 + k * v2);
    Mat3 S, U, R;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double d = i == j ? 1.0 : 0.0;
        S[i * 3 + j] = d + k * v[i] * v[j];
        U[i * 3 + j] = d - sm * v[i] * v[j];
        R[i * 3 + j] = k * (a[j] * v[i] - a[i] * v[j]);
      }
    cs.S.set(n, S);
    cs.U.set(n, U);
    cs.R.set(n, R);
  });
  if (history) {
    if (!history->started()) fail(ErrorKind::invalid_input, "curl history has not been initialised");
    const TensorField P = history->predicted_curl();
    TensorField X(grid);
    kernels::for_each_node(exec, grid.size(), [&](std::size_t n) {
      const double scale = 1.0 / (coeffs.Gamma(0, n) * (1.0 + eps2 * coeffs.h(0, n)));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) X(i * 3 + j, n) = P(j * 3 + i, n) * scale;
    });
    cs.X = std::move(X);
  }
  return cs;
}

TensorField curl_residual(const FlowState& state, const DeformationData& defo, const CurlStructure& cs, Exec exec) {
  if (!cs.X) fail(ErrorKind::invalid_input, "curl residual needs X (assemble with a history)");
  const GridSpec& grid = defo.grid();
  const TensorField K = lie_gradient(state.eta_t, defo, exec).D;
  TensorField out(grid);
  kernels::for_each_node(exec, grid.size(), [&](std::size_t n) {
    const Mat3 U = cs.U.at(n);
    const Mat3 KU = mat3::mul(K.at(n), U);
    const Mat3 URU = mat3::mul(mat3::mul(U, cs.R.at(n)), U);
    const Mat3 UXU = mat3::mul(mat3::mul(U, cs.X->at(n)), U);
    Mat3 res;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        res[i * 3 + j] = (KU[j * 3 + i] - KU[i * 3 + j]) + URU[i * 3 + j] - UXU[i * 3 + j];
    out.set(n, res);
  });
  return out;
}

VorticityReport vorticity_transport_check(std::span<const FlowState> path, const WeightField& w,
                                          const ThermoParams& params, Exec exec) {
  if (path.empty()) fail(ErrorKind::invalid_input, "vorticity check needs a non-empty path");
  if (path.size() > 2) {
    const double dt = path[1].time - path[0].time;
    for (std::size_t k = 1; k < path.size(); ++k)
      if (std::abs(path[k].time - path[k - 1].time - dt) > 1e-9 * std::abs(dt))
        fail(ErrorKind::invalid_input, "vorticity check needs uniformly sampled states");
  }
  VorticityReport rep;
  CurlHistory hist;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const FlowState& st = path[k];
    if (!st.eta_tt) fail(ErrorKind::invalid_input, "vorticity check needs eta_tt on every state");
    const DeformationData defo = compute_deformation(st, exec);
    const CoefficientData coeffs = assemble_coefficients(st, defo, w, params, exec);
    const CurlSources src = curl_sources(st, defo, coeffs, params, exec);
    if (k == 0) hist.reset(st.time, src);
    else hist.advance(st.time, src);
    TensorField lv = hist.predicted_curl();
    axpy(lv, -1.0, src.curl_chi);
    TensorField kin = lv;
    axpy(kin, 1.0, hist.source_integral());
    rep.lv_defect = std::max(rep.lv_defect, max_abs(lv));
    rep.kinematic_defect = std::max(rep.kinematic_defect, max_abs(kin));
    rep.max_curl_chi = std::max(rep.max_curl_chi, max_abs(src.curl_chi));
    ++rep.states;
  }
  return rep;
}

}  // namespace lagvac
