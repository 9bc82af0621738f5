#pragma once

#include <array>
#include <span>

namespace lagvac {

/// Polytropic gas p = N^gamma with energy density rho = N + eps^2 N^gamma.
/// eps is the inverse light speed; eps == 0 is the non-relativistic branch.
struct ThermoParams {
  double gamma = 2.0;
  double eps = 0.0;
  double alpha = 1.0;  // 1/(gamma - 1)

  /// Validates gamma in (1, 3] and eps >= 0, derives alpha.
  static ThermoParams make(double gamma, double eps);

  /// The analysis assumes gamma in (1, 2); values in [2, 3] are accepted but flagged.
  bool outside_analysed_range() const noexcept { return !(gamma > 1.0 && gamma < 2.0); }
  bool relativistic() const noexcept { return eps > 0.0; }
  double eps2() const noexcept { return eps * eps; }
};

struct ThermoPoint {
  double N = 0.0;
  double rho = 0.0;
  double p = 0.0;
  double h = 0.0;
  double csq = 0.0;
};

using Vec3 = std::array<double, 3>;

/// Full thermodynamic state at particle number density N >= 0.
ThermoPoint thermo_point(double N, const ThermoParams& params);

double pressure(double N, const ThermoParams& params);
double energy_density(double N, const ThermoParams& params);
double enthalpy(double N, const ThermoParams& params);

/// Inverts rho = N + eps^2 N^gamma (safeguarded Newton on [0, rho]).
double number_density_from_energy_density(double rho, const ThermoParams& params);

/// c^2 = gamma N^(gamma-1) / (1 + eps^2 gamma N^(gamma-1)); throws at vacuum.
double sound_speed_sq(double N, const ThermoParams& params);

double lorentz_factor(std::span<const double, 3> v, const ThermoParams& params);
double lorentz_factor(const Vec3& v, const ThermoParams& params);

/// (rho + eps^2 p) / (1 - eps^2 |v|^2).
double modified_density(double rho, const Vec3& v, const ThermoParams& params);

struct EnergyPair {
  double V = 0.0;
  Vec3 H{};
};

/// kappa = int_0^1 p(s)/s^2 ds with p taken as a function of the energy density.
double energy_kappa(const ThermoParams& params);

/// N(rho) = exp(int_1^rho ds / (s + eps^2 p(s))), the normalisation entering the
/// energy pair. Not the equation-of-state number density unless gamma == 2.
double energy_pair_number_density(double rho, const ThermoParams& params);

/// Entropy/flux pair (V, H). For eps == 0 returns the non-relativistic limit
/// V = rho|v|^2/2 + rho int_0^rho p/s^2, H = v (V + p).
EnergyPair energy_pair(double rho, const Vec3& v, const ThermoParams& params);

/// Same with kappa supplied (it depends on the parameters only).
EnergyPair energy_pair(double rho, const Vec3& v, const ThermoParams& params, double kappa);

/// Ratio between the energy-pair N(rho) and the equation-of-state N(rho).
/// Constant in rho iff gamma == 2.
double number_density_consistency_ratio(double rho, const ThermoParams& params);

}  // namespace lagvac
