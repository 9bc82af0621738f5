#include "lagvac/grid.hpp"

#include <algorithm>
#include <string>

namespace lagvac {

GridSpec GridSpec::slab(std::size_t n1, std::size_t n2, std::size_t n3) {
  if (n1 < 1 || n2 < 1) fail(ErrorKind::invalid_input, "periodic axes need at least one node");
  if (n3 < 3) fail(ErrorKind::invalid_input, "bounded axis needs at least 3 nodes, got " + std::to_string(n3));
  GridSpec g;
  g.shape = {n1, n2, n3};
  g.spacing = {1.0 / static_cast<double>(n1), 1.0 / static_cast<double>(n2), 1.0 / static_cast<double>(n3 - 1)};
  return g;
}

double GridSpec::boundary_distance(std::size_t node) const noexcept {
  const std::size_t i2 = node % shape[2];
  const std::size_t j = std::min(i2, shape[2] - 1 - i2);
  return static_cast<double>(j) * spacing[2];
}

}  // namespace lagvac
