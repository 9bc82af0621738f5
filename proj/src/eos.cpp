#include "lagvac/eos.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "lagvac/error.hpp"

namespace lagvac {

namespace {

// Below this energy density the integrands p(s)/s^2 behave like a power law
// and are integrated analytically.
constexpr double kHead = 1e-6;
constexpr double kQuadTol = 1e-10;

double integrate(auto&& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 30, kQuadTol, &err);
}

// int_0^delta s^(g-2) (1 - c eps^2 s^(g-1)) ds
double power_head(double delta, double gamma, double c, double eps2) {
  const double g1 = gamma - 1.0;
  return std::pow(delta, g1) / g1 - c * eps2 * std::pow(delta, 2.0 * g1) / (2.0 * g1);
}

// I(rho) = int_1^rho p(s) / (s (s + eps^2 p(s))) ds
double log_correction_integral(double rho, const ThermoParams& params) {
  if (rho == 1.0) return 0.0;
  const double eps2 = params.eps2();
  auto g = [&](double s) {
    const double N = number_density_from_energy_density(s, params);
    const double p = pressure(N, params);
    return p / (s * (s + eps2 * p));
  };
  if (rho > 1.0) return integrate(g, 1.0, rho);
  if (rho >= kHead) return -integrate(g, rho, 1.0);
  const double tail = integrate(g, kHead, 1.0);
  const double head = power_head(kHead, params.gamma, params.gamma + 1.0, eps2) -
                      power_head(rho, params.gamma, params.gamma + 1.0, eps2);
  return -(tail + head);
}

}  // namespace

ThermoParams ThermoParams::make(double gamma, double eps) {
  if (!std::isfinite(gamma) || !(gamma > 1.0) || gamma > 3.0)
    fail(ErrorKind::invalid_input, "adiabatic exponent must lie in (1, 3], got " + std::to_string(gamma));
  if (!std::isfinite(eps) || eps < 0.0)
    fail(ErrorKind::invalid_input, "inverse light speed must be finite and >= 0");
  ThermoParams p;
  p.gamma = gamma;
  p.eps = eps;
  p.alpha = 1.0 / (gamma - 1.0);
  return p;
}

double pressure(double N, const ThermoParams& params) { return std::pow(N, params.gamma); }

double energy_density(double N, const ThermoParams& params) {
  return N + params.eps2() * std::pow(N, params.gamma);
}

double enthalpy(double N, const ThermoParams& params) {
  return params.gamma / (params.gamma - 1.0) * std::pow(N, params.gamma - 1.0);
}

ThermoPoint thermo_point(double N, const ThermoParams& params) {
  if (!std::isfinite(N) || N < 0.0) fail(ErrorKind::domain, "number density must be finite and >= 0");
  ThermoPoint t;
  t.N = N;
  t.p = pressure(N, params);
  t.rho = N + params.eps2() * t.p;
  t.h = enthalpy(N, params);
  t.csq = N > 0.0 ? sound_speed_sq(N, params) : 0.0;
  return t;
}

double number_density_from_energy_density(double rho, const ThermoParams& params) {
  if (!std::isfinite(rho)) fail(ErrorKind::invalid_input, "energy density is not finite");
  if (rho < 0.0) fail(ErrorKind::domain, "energy density must be >= 0");
  if (rho == 0.0 || params.eps == 0.0) return rho;

  const double eps2 = params.eps2();
  const double g = params.gamma;
  const double tol = 1e-12 * std::max(1.0, rho);
  double lo = 0.0;
  double hi = rho;
  double N = rho;
  for (int it = 0; it < 200; ++it) {
    const double Ng1 = std::pow(N, g - 1.0);
    const double f = N + eps2 * Ng1 * N - rho;
    if (std::abs(f) <= tol && it > 0) break;
    if (f > 0.0) hi = N; else lo = N;
    const double df = 1.0 + g * eps2 * Ng1;
    double next = N - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == N) break;
    N = next;
  }
  return N;
}

double sound_speed_sq(double N, const ThermoParams& params) {
  if (!(N > 0.0)) fail(ErrorKind::domain, "sound speed is undefined at vacuum (N <= 0)");
  const double gN = params.gamma * std::pow(N, params.gamma - 1.0);
  return gN / (1.0 + params.eps2() * gN);
}

double lorentz_factor(std::span<const double, 3> v, const ThermoParams& params) {
  const double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  if (!std::isfinite(v2)) fail(ErrorKind::invalid_input, "velocity is not finite");
  if (params.eps == 0.0) return 1.0;
  const double beta2 = params.eps2() * v2;
  if (beta2 >= 1.0) fail(ErrorKind::superluminal, "eps*|v| >= 1 (velocity reaches the light speed)");
  return 1.0 / std::sqrt(1.0 - beta2);
}

double lorentz_factor(const Vec3& v, const ThermoParams& params) {
  return lorentz_factor(std::span<const double, 3>(v), params);
}

double modified_density(double rho, const Vec3& v, const ThermoParams& params) {
  if (!(rho >= 0.0)) fail(ErrorKind::domain, "energy density must be >= 0");
  const double G = lorentz_factor(v, params);
  if (params.eps == 0.0) return rho;
  const double p = pressure(number_density_from_energy_density(rho, params), params);
  return (rho + params.eps2() * p) * G * G;
}

double energy_kappa(const ThermoParams& params) {
  if (params.eps == 0.0) return 1.0 / (params.gamma - 1.0);
  auto f = [&](double s) {
    return pressure(number_density_from_energy_density(s, params), params) / (s * s);
  };
  return power_head(kHead, params.gamma, params.gamma, params.eps2()) + integrate(f, kHead, 1.0);
}

double energy_pair_number_density(double rho, const ThermoParams& params) {
  if (!(rho > 0.0)) fail(ErrorKind::domain, "energy-pair number density needs rho > 0");
  return rho * std::exp(-params.eps2() * log_correction_integral(rho, params));
}

double number_density_consistency_ratio(double rho, const ThermoParams& params) {
  return energy_pair_number_density(rho, params) / number_density_from_energy_density(rho, params);
}

EnergyPair energy_pair(double rho, const Vec3& v, const ThermoParams& params) {
  return energy_pair(rho, v, params, params.eps == 0.0 ? 0.0 : energy_kappa(params));
}

EnergyPair energy_pair(double rho, const Vec3& v, const ThermoParams& params, double kappa) {
  if (!std::isfinite(rho) || !(rho > 0.0)) fail(ErrorKind::domain, "energy pair needs rho > 0");
  const double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  const double G = lorentz_factor(v, params);
  const double g = params.gamma;
  EnergyPair out;
  double p = 0.0;
  if (params.eps == 0.0) {
    p = std::pow(rho, g);
    out.V = 0.5 * rho * v2 + rho * std::pow(rho, g - 1.0) / (g - 1.0);
  } else {
    // The eps^-2 prefactor is cancelled analytically so small eps stays accurate.
    const double eps2 = params.eps2();
    p = pressure(number_density_from_energy_density(rho, params), params);
    const double I = log_correction_integral(rho, params);
    const double E = std::exp(-eps2 * I);
    const double G2v2 = G * G * v2;
    const double rt_minus_p = rho + eps2 * G2v2 * (rho + eps2 * p);
    out.V = G2v2 * (rho + eps2 * p) + kappa * rt_minus_p - rho * std::expm1(-eps2 * I) / eps2 -
            rho * E * G2v2 / (G + 1.0);
    p *= 1.0 + kappa * eps2;
  }
  for (int j = 0; j < 3; ++j) out.H[j] = v[j] * (out.V + p);
  return out;
}

}  // namespace lagvac
