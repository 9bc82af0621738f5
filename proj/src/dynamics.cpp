#include "lagvac/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace lagvac {

ScalarField lorentz_field(const VectorField& v, const ThermoParams& params) {
  ScalarField G(v.grid(), 1.0);
  if (params.eps == 0.0) return G;
  const double eps2 = params.eps2();
  for (std::size_t node = 0; node < v.nodes(); ++node) {
    const double v2 = v(0, node) * v(0, node) + v(1, node) * v(1, node) + v(2, node) * v(2, node);
    const double beta2 = eps2 * v2;
    if (!(beta2 < 1.0)) throw NodeError(ErrorKind::superluminal, node, "eps*|eta_t| >= 1");
    G(0, node) = 1.0 / std::sqrt(1.0 - beta2);
  }
  return G;
}

CoefficientData assemble_coefficients(const FlowState& state, const DeformationData& defo, const WeightField& w,
                                      const ThermoParams& params, Exec exec) {
  require_same_grid(state.eta_t, defo.J, "assemble_coefficients");
  require_same_grid(w.w, defo.J, "assemble_coefficients (weight)");
  const GridSpec& grid = defo.grid();
  CoefficientData c{TensorField(grid), Tensor3Field(grid), VectorField(grid), ScalarField(grid),
                    lorentz_field(state.eta_t, params)};
  const double a = params.alpha;
  const double eps2 = params.eps2();

  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const double G = c.Gamma(0, node);
    const double J = defo.J(0, node);
    const Vec3 v = state.eta_t.at(node);
    const double h = (1.0 + a) * w.w(0, node) * jacobian_power(G * J, a);
    c.h(0, node) = h;
    for (int i = 0; i < 3; ++i) c.chi(i, node) = (1.0 + eps2 * h) * G * v[i];

    if (eps2 == 0.0) {
      for (int i = 0; i < 3; ++i) c.B(i * 4, node) = 1.0;
      return;
    }
    const double scale = std::pow(G, 2.0 + 1.0 / a);
    const double iso = 1.0 + eps2 * h;
    const double aniso = (1.0 + (1.0 - 1.0 / a) * eps2 * h) * eps2 * G * G;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double b = ((i == j ? iso : 0.0) + aniso * v[i] * v[j]) * scale;
        c.B(i * 3 + j, node) = b;
        c.B(j * 3 + i, node) = b;
      }
    const double pref = -(1.0 + 1.0 / a) * eps2 * G * G * jacobian_power(J, a);
    const Mat3 A = defo.A.at(node);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          const double cc = pref * (A[k * 3 + i] * v[j] + A[k * 3 + j] * v[i]);
          c.C(k * 9 + i * 3 + j, node) = cc;
          c.C(k * 9 + j * 3 + i, node) = cc;
        }
  });
  return c;
}

TensorField pressure_flux(const DeformationData& defo, const WeightField& w, const ThermoParams& params, Exec exec) {
  const GridSpec& grid = defo.grid();
  TensorField T(grid);
  const double a = params.alpha;
  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const double wn = w.w(0, node);
    const double s = wn == 0.0 ? 0.0 : std::pow(wn, 1.0 + a) * jacobian_power(defo.J(0, node), a);
    for (int c = 0; c < 9; ++c) T(c, node) = s * defo.A(c, node);
  });
  return T;
}

VectorField system_residual(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                            const WeightField& w, const ThermoParams& params, Exec exec) {
  if (!state.eta_tt) fail(ErrorKind::invalid_input, "system residual needs eta_tt");
  const GridSpec& grid = defo.grid();
  const double a = params.alpha;
  VectorField R = kernels::divergence_rows(pressure_flux(defo, w, params, exec), exec);
  const TensorField Gv = kernels::gradient(state.eta_t, exec);
  const VectorField& acc = *state.eta_tt;
  const bool relativistic = params.relativistic();

  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const double wn = w.w(0, node);
    const double wa = std::pow(wn, a);
    const double wa1 = wa * wn;
    for (int j = 0; j < 3; ++j) {
      double inertia = 0.0;
      for (int i = 0; i < 3; ++i) inertia += coeffs.B(i * 3 + j, node) * acc(i, node);
      double mixed = 0.0;
      if (relativistic)
        for (int k = 0; k < 3; ++k)
          for (int i = 0; i < 3; ++i) mixed += coeffs.C(k * 9 + i * 3 + j, node) * Gv(i * 3 + k, node);
      R(j, node) += wa * inertia + wa1 * mixed;
    }
  });
  return R;
}

VectorField chi_rate(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                     const ThermoParams& params, Exec exec) {
  if (!state.eta_tt) fail(ErrorKind::invalid_input, "d_t chi needs eta_tt");
  const GridSpec& grid = defo.grid();
  const TensorField Gv = kernels::gradient(state.eta_t, exec);
  const double eps2 = params.eps2();
  const double g = params.gamma;
  VectorField out(grid);
  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const Vec3 v = state.eta_t.at(node);
    const Vec3 acc = state.eta_tt->at(node);
    const double G = coeffs.Gamma(0, node);
    const double h = coeffs.h(0, node);
    const Mat3 A = defo.A.at(node);
    double dlogJ = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) dlogJ += A[s * 3 + r] * Gv(r * 3 + s, node);
    const double va = v[0] * acc[0] + v[1] * acc[1] + v[2] * acc[2];
    const double iso = 1.0 + eps2 * h;
    const double aniso = (1.0 + (2.0 - g) * eps2 * h) * eps2 * G * G * va;
    const double src = (g - 1.0) * eps2 * h * G * dlogJ;
    for (int i = 0; i < 3; ++i) out(i, node) = G * (iso * acc[i] + aniso * v[i]) - src * v[i];
  });
  return out;
}

VectorField chi_h_residual(const VectorField& chi_t, const DeformationData& defo, const CoefficientData& coeffs,
                           Exec exec) {
  require_same_grid(chi_t, defo.J, "chi_h_residual");
  const GridSpec& grid = defo.grid();
  const VectorField dh = kernels::gradient(coeffs.h, exec);
  VectorField out(grid);
  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const double G = coeffs.Gamma(0, node);
    for (int j = 0; j < 3; ++j) {
      double grad = 0.0;
      for (int k = 0; k < 3; ++k) grad += defo.A(k * 3 + j, node) * dh(k, node);
      out(j, node) = G * chi_t(j, node) + grad;
    }
  });
  return out;
}

VectorField chi_h_residual(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                           const ThermoParams& params, Exec exec) {
  return chi_h_residual(chi_rate(state, defo, coeffs, params, exec), defo, coeffs, exec);
}

TensorField structure_identity_residual(const DeformationData& defo, int l, const ThermoParams& params, Exec exec) {
  if (l < 0 || l > 2) fail(ErrorKind::invalid_input, "derivative direction must be 0, 1 or 2");
  const GridSpec& grid = defo.grid();
  const double a = params.alpha;

  TensorField AJ(grid);
  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const double jp = jacobian_power(defo.J(0, node), a);
    for (int c = 0; c < 9; ++c) AJ(c, node) = defo.A(c, node) * jp;
  });
  TensorField out(grid);
  for (int c = 0; c < 9; ++c) kernels::partial(AJ[c], grid, l, out[c], exec);

  // H^r_s = d_s d_l eta^r
  TensorField H(grid);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) kernels::partial(defo.D_eta[r * 3 + l], grid, s, H[r * 3 + s], exec);

  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const Mat3 A = defo.A.at(node);
    const Mat3 Hn = H.at(node);
    const double jp = jacobian_power(defo.J(0, node), a);
    double div = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) div += A[s * 3 + r] * Hn[r * 3 + s];
    // (A H A)^k_i = A^k_r H^r_s A^s_i
    const Mat3 AHA = mat3::mul(mat3::mul(A, Hn), A);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i) {
        const double rhs = -(1.0 + 1.0 / a) * jp * A[k * 3 + i] * div + jp * (A[k * 3 + i] * div - AHA[k * 3 + i]);
        out(k * 3 + i, node) -= rhs;
      }
  });
  return out;
}

double number_density_defect(const FlowState& state, const DeformationData& defo, const WeightField& w,
                             const ThermoParams& params) {
  const ScalarField G = lorentz_field(state.eta_t, params);
  double worst = 0.0;
  for (std::size_t node = 0; node < defo.J.nodes(); ++node) {
    const double wa = std::pow(w.w(0, node), params.alpha);
    const double GJ = G(0, node) * defo.J(0, node);
    const double N = wa / GJ;
    const double back = number_density_from_energy_density(energy_density(N, params), params);
    worst = std::max(worst, std::abs(back * GJ - wa));
  }
  return worst;
}

}  // namespace lagvac
