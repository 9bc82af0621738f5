#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lagvac/grid.hpp"

namespace lagvac {

/// Execution policy for node loops. `serial` is the reference path kept for
/// testing; `parallel` distributes node loops with OpenMP. Each node is
/// computed independently, so both give bitwise-identical results.
enum class Exec { serial, parallel };

namespace kernels {

template <class F>
void for_each_node(Exec exec, std::size_t n, F&& f) {
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
  }
}

/// Second-order derivative along one axis: centred in the interior and on
/// periodic axes, one-sided three-point at the x3 faces. A periodic axis with
/// a single node has derivative exactly zero.
void partial(std::span<const double> f, const GridSpec& grid, int axis, std::span<double> out,
             Exec exec = Exec::parallel);

std::vector<double> partial(std::span<const double> f, const GridSpec& grid, int axis,
                            Exec exec = Exec::parallel);

/// Repeated application of `partial`: d1^o[0] d2^o[1] d3^o[2] f.
std::vector<double> mixed_partial(std::span<const double> f, const GridSpec& grid,
                                  const std::array<int, 3>& orders, Exec exec = Exec::parallel);

/// G^r_s = dF^r/dx_s, stored at r*3 + s.
TensorField gradient(const VectorField& F, Exec exec = Exec::parallel);
VectorField gradient(const ScalarField& f, Exec exec = Exec::parallel);

/// Gradient of a flow map. The displacement eta - k x is differenced (it is
/// periodic in x1, x2 even though eta is not) and k added back on the
/// diagonal, where k is the winding number along each periodic axis (1 for
/// maps close to the identity, 1 on the bounded axis).
TensorField map_gradient(const VectorField& eta, Exec exec = Exec::parallel);

/// Divergence-type contraction d_k T^k_i for a tensor stored at k*3 + i.
VectorField divergence_rows(const TensorField& T, Exec exec = Exec::parallel);

/// Trapezoid weights: h1 h2 h3 in the interior, halved on the x3 faces.
double quadrature_weight(const GridSpec& grid, std::size_t node) noexcept;

/// Ordered (index-order) trapezoid integral over the slab.
double integrate(std::span<const double> f, const GridSpec& grid);

double max_abs(std::span<const double> f);

/// Ordered sum, fixed left-to-right association.
double ordered_sum(std::span<const double> f);

}  // namespace kernels
}  // namespace lagvac
