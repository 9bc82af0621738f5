#include "lagvac/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace lagvac::kernels {

void partial(std::span<const double> f, const GridSpec& grid, int axis, std::span<double> out, Exec exec) {
  const std::size_t n = grid.size();
  require(f.size() == n && out.size() == n, "partial: field size does not match grid");
  const std::size_t len = grid.shape[axis];
  const std::size_t stride = axis == 2 ? 1 : (axis == 1 ? grid.shape[2] : grid.shape[1] * grid.shape[2]);
  const double h = grid.spacing[axis];
  const double inv2h = 0.5 / h;

  if (axis < 2) {
    if (len == 1) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    for_each_node(exec, n, [&](std::size_t node) {
      const std::size_t i = (node / stride) % len;
      const std::size_t base = node - i * stride;
      const std::size_t ip = (i + 1 == len) ? 0 : i + 1;
      const std::size_t im = (i == 0) ? len - 1 : i - 1;
      out[node] = (f[base + ip * stride] - f[base + im * stride]) * inv2h;
    });
    return;
  }

  for_each_node(exec, n, [&](std::size_t node) {
    const std::size_t i = node % len;
    if (i == 0) {
      out[node] = (-3.0 * f[node] + 4.0 * f[node + 1] - f[node + 2]) * inv2h;
    } else if (i + 1 == len) {
      out[node] = (3.0 * f[node] - 4.0 * f[node - 1] + f[node - 2]) * inv2h;
    } else {
      out[node] = (f[node + 1] - f[node - 1]) * inv2h;
    }
  });
}

std::vector<double> partial(std::span<const double> f, const GridSpec& grid, int axis, Exec exec) {
  std::vector<double> out(grid.size());
  partial(f, grid, axis, out, exec);
  return out;
}

std::vector<double> mixed_partial(std::span<const double> f, const GridSpec& grid,
                                  const std::array<int, 3>& orders, Exec exec) {
  std::vector<double> cur(f.begin(), f.end());
  std::vector<double> next(cur.size());
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < orders[axis]; ++k) {
      partial(cur, grid, axis, next, exec);
      cur.swap(next);
    }
  }
  return cur;
}

TensorField gradient(const VectorField& F, Exec exec) {
  TensorField G(F.grid());
  for (std::size_t r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) partial(F[r], F.grid(), s, G[r * 3 + s], exec);
  return G;
}

VectorField gradient(const ScalarField& f, Exec exec) {
  VectorField G(f.grid());
  for (int s = 0; s < 3; ++s) partial(f[0], f.grid(), s, G[s], exec);
  return G;
}

TensorField map_gradient(const VectorField& eta, Exec exec) {
  const GridSpec& grid = eta.grid();
  // A torus map may wind: eta^a(x + e_a) = eta^a(x) + k_a. The integer k_a is
  // read off the line through the origin and its linear part removed.
  std::array<double, 3> winding{1.0, 1.0, 1.0};
  for (int a = 0; a < 2; ++a) {
    const std::size_t len = grid.shape[a];
    if (len < 2) continue;
    const std::size_t stride = a == 1 ? grid.shape[2] : grid.shape[1] * grid.shape[2];
    const auto e = eta[a];
    const double last = e[(len - 1) * stride];
    const double span = last - e[0] + (last - e[(len - 2) * stride]);
    winding[a] = std::round(span);
  }
  VectorField disp(grid);
  for (std::size_t r = 0; r < 3; ++r) {
    auto d = disp[r];
    auto e = eta[r];
    const double k = winding[r];
    for_each_node(exec, grid.size(), [&](std::size_t node) {
      d[node] = e[node] - k * grid.position(node)[r];
    });
  }
  TensorField G = gradient(disp, exec);
  for (std::size_t r = 0; r < 3; ++r) {
    auto g = G[r * 3 + r];
    const double k = winding[r];
    for_each_node(exec, grid.size(), [&](std::size_t node) { g[node] += k; });
  }
  return G;
}

VectorField divergence_rows(const TensorField& T, Exec exec) {
  const GridSpec& grid = T.grid();
  VectorField out(grid);
  std::vector<double> tmp(grid.size());
  for (std::size_t i = 0; i < 3; ++i) {
    auto o = out[i];
    for (int k = 0; k < 3; ++k) {
      partial(T[k * 3 + i], grid, k, tmp, exec);
      for_each_node(exec, grid.size(), [&](std::size_t node) { o[node] += tmp[node]; });
    }
  }
  return out;
}

double quadrature_weight(const GridSpec& grid, std::size_t node) noexcept {
  const double w = grid.spacing[0] * grid.spacing[1] * grid.spacing[2];
  return grid.on_boundary(node) ? 0.5 * w : w;
}

double integrate(std::span<const double> f, const GridSpec& grid) {
  double sum = 0.0;
  for (std::size_t node = 0; node < f.size(); ++node) sum += quadrature_weight(grid, node) * f[node];
  return sum;
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

double ordered_sum(std::span<const double> f) {
  double s = 0.0;
  for (double x : f) s += x;
  return s;
}

}  // namespace lagvac::kernels
