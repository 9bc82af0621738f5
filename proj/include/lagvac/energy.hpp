#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lagvac/vorticity.hpp"

namespace lagvac {

/// Contributions of one derivative multi-index (m1, m2 tangential, n normal).
struct EnergyTerm {
  std::array<int, 3> index{};  // m1, m2, n
  double E_I = 0.0;
  double E_II = 0.0;
  double E_III = 0.0;
  double E_IV = 0.0;
};

struct AprioriEntry {
  std::array<int, 3> index{};  // p1, p2, q
  bool velocity = false;       // eta_t row instead of eta
  double value = 0.0;          // max over nodes and (r, s) of |w^(q/2) d^p d3^q d_s eta^r|
};

struct EnergyReport {
  double time = 0.0;
  int order = 0;                // diagnostic order N
  double full_order = 0.0;      // 2 alpha + 9
  std::vector<EnergyTerm> terms;
  double E_I = 0.0;
  double E_II = 0.0;
  double E_III = 0.0;
  double E_IV = 0.0;
  double E_total = 0.0;         // E_I + E_III + E_IV
  std::vector<AprioriEntry> apriori;

  const EnergyTerm& term(int m1, int m2, int n) const;
};

/// min(2 ceil(alpha) + 9, 4) in 3D and min(2 ceil(alpha) + 9, 8) in planar symmetry.
int default_diagnostic_order(double alpha, const GridSpec& grid);

/// Throws invalid_input naming (m, n) when the grid cannot carry the stencil.
void require_stencil(const GridSpec& grid, const std::array<int, 3>& orders);

/// Weighted energies up to order N. `cs` supplies U for the gradient energy.
EnergyReport energy_functionals(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                                const CurlStructure& cs, const WeightField& w, const ThermoParams& params, int N,
                                Exec exec = Exec::parallel);

/// Sup-norm table of the a priori assumption for |p| + q <= N/2 (eta) and N/2 - 1 (eta_t).
std::vector<AprioriEntry> apriori_monitor(const FlowState& state, const DeformationData& defo, const WeightField& w,
                                          int N, Exec exec = Exec::parallel);

/// Function sampled at composite Gauss-Legendre nodes on (0, 1), graded towards 0.
struct SampledFunction {
  std::vector<double> s, weight, g, dg;
  double g0 = 0.0;

  static SampledFunction sample(const std::function<double(double)>& g, const std::function<double(double)>& dg,
                                int panels = 48);
};

struct HardyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// k > 1: int s^(k-2) g^2 against int s^k (g^2 + g'^2).
/// k < 1: int s^(k-2) (g - g(0))^2 against int s^k g'^2.
HardyResult hardy_check(const SampledFunction& g, double k);

struct WeightedNorms {
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
  double sup_ratio = 0.0;  // |F|_inf / X
};

WeightedNorms weighted_space_norms(const ScalarField& F, const WeightField& w, const DeformationData& defo,
                                   double alpha, int b, Exec exec = Exec::parallel);

/// Monitored form of the energy inequality: the rate of
/// E^(I)_{0,n} + (1 + 1/alpha) E^(II)_{0,n}, n <= 2, against c0 (1 + E)^c1 with
/// E = E_N^(I) + E_N^(III).
class EnergyInequalityMonitor {
 public:
  struct Sample {
    double time = 0.0;
    double rate = 0.0;     // largest rate over n <= max_n
    double energy = 0.0;   // E_N^(I) + E_N^(III)
  };
  struct Event {
    double time = 0.0;
    double rate = 0.0;
    double bound = 0.0;
  };

  explicit EnergyInequalityMonitor(double alpha, int max_n = 2) : alpha_(alpha), max_n_(max_n) {}

  /// Centred-difference rates from a uniformly spaced report series.
  std::vector<Sample> rates(std::span<const EnergyReport> reports) const;

  /// Fits c1 by log regression of rate on (1 + E) and sets c0 to twice the envelope.
  void calibrate(std::span<const EnergyReport> reports);
  void set_majorant(double c0, double c1) { c0_ = c0; c1_ = c1; calibrated_ = true; }

  double bound(double energy) const;
  std::vector<Event> check(std::span<const EnergyReport> reports) const;

  double c0() const noexcept { return c0_; }
  double c1() const noexcept { return c1_; }
  bool calibrated() const noexcept { return calibrated_; }

 private:
  double alpha_;
  int max_n_;
  double c0_ = 0.0;
  double c1_ = 0.0;
  bool calibrated_ = false;
};

}  // namespace lagvac
