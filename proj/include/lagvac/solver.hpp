#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lagvac/energy.hpp"
#include "lagvac/expr.hpp"

namespace lagvac {

/// Planar-symmetric run: eta = (x1, x2, eta3(t, x3)).
struct SolverConfig {
  ThermoParams params = ThermoParams::make(2.0, 0.0);
  std::size_t n3 = 256;
  WeightProfile weight = WeightProfile::parabolic();
  std::string eta0 = "x3";  // normal component of the initial flow map
  std::string eta1 = "0";   // normal component of the initial velocity
  /// Manufactured solution eta3(t, x3). When set, the forcing that makes it
  /// exact is derived symbolically and eta0/eta1 are taken from it.
  std::optional<std::string> exact_solution;
  double t_end = 0.5;
  double cfl = 0.4;
  double output_interval = 0.0;  // <= 0: initial and final states only
  int diagnostic_order = -1;     // < 0: default_diagnostic_order
  bool energy_reports = true;
  Exec exec = Exec::parallel;

  void validate() const;
};

/// One logged instant (a row of the energy CSV plus extra monitors).
struct MonitorRow {
  double t = 0.0;
  double E_I = 0.0, E_II = 0.0, E_III = 0.0, E_IV = 0.0, E_total = 0.0;
  double g0_defect = 0.0;
  double energy_drift = 0.0;  // relative drift of the conserved discrete energy
  double chi_h_res = 0.0;
  double min_J = 0.0;
  double max_eps_v = 0.0;
  /// Conserved energy of the scheme; for eps = 0 this is
  /// 1/2 int w^a |eta_t|^2 + a int w^(1+a) J^(-1/a).
  double discrete_energy = 0.0;
  double max_curl_chi = 0.0;
  double vacuum_slope = 0.0;  // min over both faces of |d3 c^2| next to the boundary
};

struct Trajectory {
  SolverConfig config;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<FlowState> states;  // with eta_tt
  std::vector<EnergyReport> reports;
  std::vector<MonitorRow> log;
  std::vector<std::string> events;
};

/// Raised when a run leaves the admissible set; keeps what was computed.
class SimulationAborted : public Error {
 public:
  SimulationAborted(const std::string& what, Trajectory partial, FlowState last)
      : Error(ErrorKind::simulation_aborted, what), partial_(std::move(partial)), last_(std::move(last)) {}
  const Trajectory& partial() const noexcept { return partial_; }
  const FlowState& last_state() const noexcept { return last_; }

 private:
  Trajectory partial_;
  FlowState last_;
};

/// Staggered planar scheme integrated with classical RK4.
Trajectory run(const SolverConfig& config);

struct MmsResult {
  std::vector<std::size_t> n3;
  std::vector<double> error;   // L-infinity error of eta3 at t_end
  std::vector<double> orders;  // pairwise log2 ratios
  double fitted_order = 0.0;   // least-squares slope against log h
};

MmsResult mms_study(const SolverConfig& base, const std::vector<std::size_t>& n3_list);

struct LimitRow {
  double eps = 0.0;
  double sup_difference = 0.0;  // max over nodes and logged times of |eta_eps - eta_0|
  double reduction = 0.0;       // previous row's difference / this one (0 for the first)
  double max_B_deviation = 0.0; // max over nodes and logged times of |B - delta|
  bool aborted = false;
  std::string message;
};

/// Runs the same data for each eps (descending) and compares with eps = 0.
std::vector<LimitRow> limit_sweep(const SolverConfig& base, const std::vector<double>& eps_list);

struct ConservedRow {
  double t = 0.0;
  double g0_defect = 0.0;
  double relativistic_energy = 0.0;  // trapezoid int V J dx
  double discrete_energy_drift = 0.0;
  double chi_h_res = 0.0;
};

std::vector<ConservedRow> conserved_monitor(const Trajectory& traj);

/// Max-node Frobenius norm of B - delta.
double max_B_deviation(const CoefficientData& coeffs);

}  // namespace lagvac
