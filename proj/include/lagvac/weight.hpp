#pragma once

#include <array>
#include <string>
#include <string_view>

#include "lagvac/expr.hpp"
#include "lagvac/grid.hpp"

namespace lagvac {

/// Prescribed weight w(x), vanishing on the vacuum faces like the distance
/// to the boundary. Derivatives come from the closed form, never from
/// differencing samples.
class WeightProfile {
 public:
  /// scale * x3 (1 - x3)
  static WeightProfile parabolic(double scale = 1.0);
  static WeightProfile from_expression(std::string_view text);

  double operator()(const std::array<double, 3>& x) const { return value_(x[0], x[1], x[2]); }
  double derivative(const std::array<int, 3>& orders, const std::array<double, 3>& x) const;
  Expression derivative_expression(const std::array<int, 3>& orders) const;

  const Expression& expression() const noexcept { return value_; }
  const std::string& description() const noexcept { return description_; }
  bool is_parabolic() const noexcept { return parabolic_; }

 private:
  Expression value_;
  std::string description_;
  bool parabolic_ = false;
};

struct WeightField {
  WeightProfile profile;
  ScalarField w;
  VectorField grad_w;
  double c_lower = 0.0;  // C_ w/d >= C_
  double c_upper = 0.0;  // w/d <= C^
  int max_order = 0;     // highest derivative order the norms may request

  const GridSpec& grid() const noexcept { return w.grid(); }

  /// d1^o[0] d2^o[1] d3^o[2] w sampled on the grid (analytic).
  ScalarField derivative(const std::array<int, 3>& orders) const;
};

/// Samples `profile` on `grid` and validates it: w = 0 on the faces, w > 0
/// inside, and w/d bounded above and below (the face limits use the normal
/// derivative). Throws Error(invalid_weight) otherwise.
WeightField make_weight(const WeightProfile& profile, const GridSpec& grid, int max_order = 12);

struct WeightNorms {
  double F = 0.0;    // sum_{|m|+n<=M} int w^(alpha+n+1) |d_tau^m d_3^n w|^2
  double F_I = 0.0;  // same with the full gradient of each derivative
};

/// Regularity functionals of the weight, trapezoid quadrature.
WeightNorms weight_norms(const WeightField& w, int M, double alpha);

}  // namespace lagvac
