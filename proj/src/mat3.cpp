#include "lagvac/mat3.hpp"

#include <Eigen/Dense>

namespace lagvac::mat3 {

std::array<double, 3> symmetric_eigenvalues(const Mat3& a) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = a[i * 3 + j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev[0], ev[1], ev[2]};
}

}  // namespace lagvac::mat3
