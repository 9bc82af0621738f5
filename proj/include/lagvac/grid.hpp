#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lagvac/error.hpp"

namespace lagvac {

/// Uniform node grid on T^2 x [0,1]. Axes 0 and 1 are periodic with spacing
/// 1/n; axis 2 is bounded and its nodes include both faces x3 = 0 and x3 = 1.
/// n1 = n2 = 1 is the planar-symmetric case.
struct GridSpec {
  std::array<std::size_t, 3> shape{1, 1, 3};
  std::array<double, 3> spacing{1.0, 1.0, 0.5};

  static GridSpec slab(std::size_t n1, std::size_t n2, std::size_t n3);
  static GridSpec planar(std::size_t n3) { return slab(1, 1, n3); }

  std::size_t size() const noexcept { return shape[0] * shape[1] * shape[2]; }
  bool planar_symmetric() const noexcept { return shape[0] == 1 && shape[1] == 1; }

  // Axis 2 is the fastest-varying index.
  std::size_t index(std::size_t i0, std::size_t i1, std::size_t i2) const noexcept {
    return (i0 * shape[1] + i1) * shape[2] + i2;
  }
  std::array<std::size_t, 3> unravel(std::size_t node) const noexcept {
    return {node / (shape[1] * shape[2]), (node / shape[2]) % shape[1], node % shape[2]};
  }
  double coord(int axis, std::size_t i) const noexcept { return static_cast<double>(i) * spacing[axis]; }
  std::array<double, 3> position(std::size_t node) const noexcept {
    const auto ix = unravel(node);
    return {coord(0, ix[0]), coord(1, ix[1]), coord(2, ix[2])};
  }
  bool on_boundary(std::size_t node) const noexcept {
    const std::size_t i2 = node % shape[2];
    return i2 == 0 || i2 + 1 == shape[2];
  }
  /// Distance to the vacuum boundary, min(x3, 1 - x3).
  double boundary_distance(std::size_t node) const noexcept;

  bool operator==(const GridSpec&) const = default;
};

/// Node-sampled field with C components, stored component-major
/// (structure of arrays). Tensors use row-major component index r*3 + c.
template <std::size_t C>
class GridField {
 public:
  static constexpr std::size_t components = C;

  GridField() = default;
  explicit GridField(const GridSpec& grid, double fill = 0.0) : grid_(grid) {
    for (auto& c : data_) c.assign(grid.size(), fill);
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t nodes() const noexcept { return grid_.size(); }

  std::span<double> operator[](std::size_t c) noexcept { return data_[c]; }
  std::span<const double> operator[](std::size_t c) const noexcept { return data_[c]; }
  double& operator()(std::size_t c, std::size_t node) noexcept { return data_[c][node]; }
  double operator()(std::size_t c, std::size_t node) const noexcept { return data_[c][node]; }

  std::array<double, C> at(std::size_t node) const noexcept {
    std::array<double, C> out{};
    for (std::size_t c = 0; c < C; ++c) out[c] = data_[c][node];
    return out;
  }
  void set(std::size_t node, const std::array<double, C>& v) noexcept {
    for (std::size_t c = 0; c < C; ++c) data_[c][node] = v[c];
  }

  std::vector<double>& raw(std::size_t c) noexcept { return data_[c]; }
  const std::vector<double>& raw(std::size_t c) const noexcept { return data_[c]; }

  bool operator==(const GridField&) const = default;

 private:
  GridSpec grid_{};
  std::array<std::vector<double>, C> data_{};
};

using ScalarField = GridField<1>;
using VectorField = GridField<3>;
using TensorField = GridField<9>;
/// Three-index tensor T^k_{ij} stored at component k*9 + i*3 + j.
using Tensor3Field = GridField<27>;

template <std::size_t C1, std::size_t C2>
void require_same_grid(const GridField<C1>& a, const GridField<C2>& b, const char* what) {
  if (!(a.grid() == b.grid())) throw Error(ErrorKind::invalid_input, std::string("grid shape mismatch: ") + what);
}

}  // namespace lagvac
