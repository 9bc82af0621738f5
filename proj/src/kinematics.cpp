#include "lagvac/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lagvac/mat3.hpp"

namespace lagvac {

FlowState FlowState::identity(const GridSpec& grid) {
  FlowState s;
  s.eta = VectorField(grid);
  s.eta_t = VectorField(grid);
  for (std::size_t node = 0; node < grid.size(); ++node) s.eta.set(node, grid.position(node));
  return s;
}

DeformationData compute_deformation(const VectorField& eta, Exec exec) {
  const GridSpec& grid = eta.grid();
  DeformationData d;
  d.D_eta = kernels::map_gradient(eta, exec);
  d.A = TensorField(grid);
  d.J = ScalarField(grid);
  d.cof = TensorField(grid);
  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const Mat3 D = d.D_eta.at(node);
    const double J = mat3::det(D);
    d.J(0, node) = J;
    if (J > 0.0) {
      const Mat3 A = mat3::inverse(D, J);
      d.A.set(node, A);
      Mat3 cof;
      for (int c = 0; c < 9; ++c) cof[c] = J * A[c];
      d.cof.set(node, cof);
    }
  });
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const double J = d.J(0, node);
    if (!(J > 0.0))
      throw NodeError(ErrorKind::degenerate_map, node, "flow map is not orientation preserving (J = " + std::to_string(J) + ")");
  }
  return d;
}

DeformationData compute_deformation(const FlowState& state, Exec exec) { return compute_deformation(state.eta, exec); }

namespace {

// M^i_r = G^i_s A^s_r
inline Mat3 lagrangian_gradient(const Mat3& G, const Mat3& A) { return mat3::mul(G, A); }

}  // namespace

LieDerivatives lie_gradient_from(const TensorField& G, const DeformationData& defo, Exec exec) {
  require_same_grid(G, defo.J, "lie_gradient");
  const GridSpec& grid = G.grid();
  LieDerivatives out{TensorField(grid), ScalarField(grid), VectorField(grid), TensorField(grid)};
  kernels::for_each_node(exec, grid.size(), [&](std::size_t node) {
    const Mat3 M = lagrangian_gradient(G.at(node), defo.A.at(node));
    out.D.set(node, M);
    out.div(0, node) = M[0] + M[4] + M[8];
    out.curl.set(node, {M[7] - M[5], M[2] - M[6], M[3] - M[1]});
    Mat3 C;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) C[i * 3 + j] = M[i * 3 + j] - M[j * 3 + i];
    out.Curl.set(node, C);
  });
  return out;
}

LieDerivatives lie_gradient(const VectorField& F, const DeformationData& defo, Exec exec) {
  require_same_grid(F, defo.J, "lie_gradient");
  return lie_gradient_from(kernels::gradient(F, exec), defo, exec);
}

TensorField lagrangian_curl_matrix(const TensorField& G, const DeformationData& defo, Exec exec) {
  require_same_grid(G, defo.J, "lagrangian_curl_matrix");
  TensorField out(G.grid());
  kernels::for_each_node(exec, G.nodes(), [&](std::size_t node) {
    const Mat3 M = lagrangian_gradient(G.at(node), defo.A.at(node));
    Mat3 C;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) C[i * 3 + j] = M[i * 3 + j] - M[j * 3 + i];
    out.set(node, C);
  });
  return out;
}

VectorField piola_residual(const DeformationData& defo, Exec exec) { return kernels::divergence_rows(defo.cof, exec); }

double max_norm(const VectorField& v) {
  double m = 0.0;
  for (std::size_t node = 0; node < v.nodes(); ++node) {
    const double a = v(0, node), b = v(1, node), c = v(2, node);
    m = std::max(m, std::sqrt(a * a + b * b + c * c));
  }
  return m;
}

RateIdentityReport verify_rate_identities(std::span<const FlowState> path, Exec exec) {
  if (path.size() < 3) fail(ErrorKind::invalid_input, "rate identities need at least 3 states");
  const double dt = path[1].time - path[0].time;
  if (!(dt > 0.0)) fail(ErrorKind::invalid_input, "path times must increase");
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double step = path[k].time - path[k - 1].time;
    if (std::abs(step - dt) > 1e-9 * dt) fail(ErrorKind::invalid_input, "path is not uniformly sampled in time");
    require_same_grid(path[k].eta, path[0].eta, "rate identity path");
  }

  std::vector<DeformationData> defo;
  defo.reserve(path.size());
  for (const auto& s : path) defo.push_back(compute_deformation(s, exec));

  RateIdentityReport rep;
  const std::size_t n = path[0].eta.nodes();
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    const TensorField Gv = kernels::gradient(path[k].eta_t, exec);
    std::vector<double> resA(n), resJ(n);
    kernels::for_each_node(exec, n, [&](std::size_t node) {
      const Mat3 A = defo[k].A.at(node);
      const Mat3 G = Gv.at(node);
      const Mat3 Ap = defo[k + 1].A.at(node);
      const Mat3 Am = defo[k - 1].A.at(node);
      const Mat3 rhs = mat3::mul(mat3::mul(A, G), A);
      double ra = 0.0;
      for (int c = 0; c < 9; ++c) ra = std::max(ra, std::abs((Ap[c] - Am[c]) / (2.0 * dt) + rhs[c]));
      resA[node] = ra;
      const double J = defo[k].J(0, node);
      double trace = 0.0;
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) trace += A[s * 3 + r] * G[r * 3 + s];
      const double dJ = (defo[k + 1].J(0, node) - defo[k - 1].J(0, node)) / (2.0 * dt);
      resJ[node] = std::abs(dJ - J * trace);
    });
    rep.A_residual = std::max(rep.A_residual, kernels::max_abs(resA));
    rep.J_residual = std::max(rep.J_residual, kernels::max_abs(resJ));
    ++rep.checked_states;
  }
  return rep;
}

}  // namespace lagvac
