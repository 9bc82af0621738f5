#include "lagvac/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lagvac/kernels.hpp"

namespace lagvac {

WeightProfile WeightProfile::parabolic(double scale) {
  if (!(scale > 0.0)) fail(ErrorKind::invalid_weight, "parabolic weight scale must be positive");
  WeightProfile p;
  const auto x3 = Expression::variable(Expression::Var::x3);
  p.value_ = Expression::constant(scale) * x3 * (Expression::constant(1.0) - x3);
  std::ostringstream os;
  os << "parabolic";
  if (scale != 1.0) os << " (scale " << scale << ")";
  p.description_ = os.str();
  p.parabolic_ = true;
  return p;
}

WeightProfile WeightProfile::from_expression(std::string_view text) {
  WeightProfile p;
  p.value_ = Expression::parse(text);
  if (p.value_.depends_on(Expression::Var::t)) fail(ErrorKind::invalid_weight, "weight must not depend on t");
  p.description_ = std::string(text);
  return p;
}

Expression WeightProfile::derivative_expression(const std::array<int, 3>& orders) const {
  Expression e = value_;
  e = e.derivative(Expression::Var::x1, orders[0]);
  e = e.derivative(Expression::Var::x2, orders[1]);
  e = e.derivative(Expression::Var::x3, orders[2]);
  return e;
}

double WeightProfile::derivative(const std::array<int, 3>& orders, const std::array<double, 3>& x) const {
  return derivative_expression(orders)(x[0], x[1], x[2]);
}

ScalarField WeightField::derivative(const std::array<int, 3>& orders) const {
  if (orders[0] + orders[1] + orders[2] > max_order)
    fail(ErrorKind::invalid_input, "weight derivative of order " + std::to_string(orders[0] + orders[1] + orders[2]) +
                                       " exceeds the available order " + std::to_string(max_order));
  const GridSpec& grid = w.grid();
  ScalarField out(grid);
  const Expression e = profile.derivative_expression(orders);
  if (e.is_constant()) {
    const double c = e(0, 0, 0);
    std::fill(out[0].begin(), out[0].end(), c);
    return out;
  }
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const auto x = grid.position(node);
    out(0, node) = e(x[0], x[1], x[2]);
  }
  return out;
}

WeightField make_weight(const WeightProfile& profile, const GridSpec& grid, int max_order) {
  WeightField wf;
  wf.profile = profile;
  wf.max_order = max_order;
  wf.w = ScalarField(grid);
  wf.grad_w = VectorField(grid);
  const Expression dw[3] = {profile.derivative_expression({1, 0, 0}), profile.derivative_expression({0, 1, 0}),
                            profile.derivative_expression({0, 0, 1})};

  constexpr double kZero = 1e-12;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const auto x = grid.position(node);
    const double w = profile(x);
    wf.w(0, node) = w;
    for (int a = 0; a < 3; ++a) wf.grad_w(a, node) = dw[a](x[0], x[1], x[2]);
    if (!std::isfinite(w)) fail(ErrorKind::invalid_weight, "weight is not finite at node " + std::to_string(node));
    if (grid.on_boundary(node)) {
      if (std::abs(w) > kZero)
        fail(ErrorKind::invalid_weight, "weight does not vanish on the vacuum boundary (w = " + std::to_string(w) + ")");
      wf.w(0, node) = 0.0;
      // w/d tends to |d3 w| at the face
      const double slope = wf.grad_w(2, node);
      const bool bottom = node % grid.shape[2] == 0;
      const double ratio = bottom ? slope : -slope;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    } else {
      if (!(w > 0.0))
        fail(ErrorKind::invalid_weight, "weight must be positive inside the domain (node " + std::to_string(node) + ")");
      const double ratio = w / grid.boundary_distance(node);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  if (!(lo > 1e-10))
    fail(ErrorKind::invalid_weight, "weight is not comparable to the boundary distance (w/d lower bound " +
                                        std::to_string(lo) + ")");
  wf.c_lower = lo;
  wf.c_upper = hi;
  return wf;
}

WeightNorms weight_norms(const WeightField& w, int M, double alpha) {
  if (M < 0) fail(ErrorKind::invalid_input, "norm order must be >= 0");
  if (M + 1 > w.max_order)
    fail(ErrorKind::invalid_input, "weight norms of order " + std::to_string(M) + " need derivatives to order " +
                                       std::to_string(M + 1) + ", available " + std::to_string(w.max_order));
  const GridSpec& grid = w.grid();
  const std::size_t n = grid.size();
  WeightNorms out;
  std::vector<double> fF(n), fI(n);
  for (int total = 0; total <= M; ++total) {
    for (int m1 = 0; m1 <= total; ++m1) {
      for (int m2 = 0; m1 + m2 <= total; ++m2) {
        const int k = total - m1 - m2;
        const ScalarField d = w.derivative({m1, m2, k});
        const ScalarField d1 = w.derivative({m1 + 1, m2, k});
        const ScalarField d2 = w.derivative({m1, m2 + 1, k});
        const ScalarField d3 = w.derivative({m1, m2, k + 1});
        for (std::size_t node = 0; node < n; ++node) {
          const double pw = std::pow(w.w(0, node), alpha + k + 1.0);
          fF[node] = pw * d(0, node) * d(0, node);
          fI[node] = pw * (d1(0, node) * d1(0, node) + d2(0, node) * d2(0, node) + d3(0, node) * d3(0, node));
        }
        out.F += kernels::integrate(fF, grid);
        out.F_I += kernels::integrate(fI, grid);
      }
    }
  }
  return out;
}

}  // namespace lagvac
