#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lagvac/solver.hpp"

namespace lagvac::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  std::string criterion;
  std::string detail;
};

struct Check {
  std::string name;
  std::string group;
  std::function<CheckResult()> run;
};

/// Every invariant/property check, cheapest first.
const std::vector<Check>& registry();

/// Runs the checks whose name or group matches one of `selectors` (all when empty).
std::vector<CheckResult> run_suite(const std::vector<std::string>& selectors);

/// Least-squares slope of log(err) against log(1/h); the measured order.
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

/// Coupled smooth perturbation of the identity on T^2 x [0,1]:
/// x + 0.05 (sin(2 pi (x1+x2)) x3, cos(2 pi x1) x3 (1-x3), sin(2 pi x2) x3^2 + x3 (1-x3)).
VectorField perturbed_identity(const GridSpec& grid);

struct RefinementStudy {
  std::vector<double> h;      // axis-3 spacing
  std::vector<double> error;  // max-node residual
  double order = 0.0;
};

/// Max-node Piola residual on (n3/4, n3/4, n3) grids.
RefinementStudy piola_study(const std::vector<std::size_t>& n3_list, Exec exec = Exec::parallel);

/// curl_eta of omega^k = A^r_k f_,r with f = sin(2 pi x1) x3, same grids.
RefinementStudy gradient_curl_study(const std::vector<std::size_t>& n3_list, Exec exec = Exec::parallel);

/// Structure identity residual for l = 3 on the perturbed map.
RefinementStudy structure_identity_study(const std::vector<std::size_t>& n3_list, double alpha,
                                         Exec exec = Exec::parallel);

/// max_node | |Curl F|^2 - 2 |curl F|^2 | for a smooth rotational F on the perturbed map.
double curl_norm_identity_defect(std::size_t n3, Exec exec = Exec::parallel);

struct DetSReport {
  double det_defect = 0.0;      // max |det S - Gamma^2| / Gamma^2
  double inverse_defect = 0.0;  // max |U S - I|
  double rank_one_defect = 0.0; // max |U - inverse(S)|
  std::size_t samples = 0;
};

/// Random admissible (v, eps) samples with eps |v| <= 0.99, fixed seed.
DetSReport det_s_samples(std::size_t count, std::uint64_t seed = 20240611);

}  // namespace lagvac::verify
