#include "lagvac/energy.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace lagvac {

namespace {

std::string index_name(const std::array<int, 3>& o) {
  return "(m=(" + std::to_string(o[0]) + "," + std::to_string(o[1]) + "), n=" + std::to_string(o[2]) + ")";
}

std::vector<std::array<int, 3>> multi_indices(int N) {
  std::vector<std::array<int, 3>> out;
  for (int total = 0; total <= N; ++total)
    for (int m1 = total; m1 >= 0; --m1)
      for (int m2 = total - m1; m2 >= 0; --m2) out.push_back({m1, m2, total - m1 - m2});
  return out;
}

bool tangential(const std::array<int, 3>& o) { return o[0] + o[1] > 0; }

VectorField derivative(const VectorField& F, const std::array<int, 3>& o, Exec exec) {
  VectorField out(F.grid());
  for (std::size_t r = 0; r < 3; ++r) out.raw(r) = kernels::mixed_partial(F[r], F.grid(), o, exec);
  return out;
}

// d^o eta: one derivative is taken from the deformation tensor (which handles
// the non-periodic linear part), the rest by differencing its column.
VectorField map_derivative(const VectorField& eta, const TensorField& D, const std::array<int, 3>& o, Exec exec) {
  if (o[0] + o[1] + o[2] == 0) return eta;
  const int axis = o[0] > 0 ? 0 : (o[1] > 0 ? 1 : 2);
  std::array<int, 3> rest = o;
  --rest[axis];
  VectorField out(eta.grid());
  for (std::size_t r = 0; r < 3; ++r)
    out.raw(r) = kernels::mixed_partial(D[r * 3 + static_cast<std::size_t>(axis)], eta.grid(), rest, exec);
  return out;
}

std::vector<double> weight_power(const WeightField& w, double power) {
  std::vector<double> out(w.w.nodes());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double wn = w.w(0, n);
    out[n] = wn == 0.0 ? (power == 0.0 ? 1.0 : 0.0) : std::pow(wn, power);
  }
  return out;
}

}  // namespace

const EnergyTerm& EnergyReport::term(int m1, int m2, int n) const {
  for (const auto& t : terms)
    if (t.index == std::array<int, 3>{m1, m2, n}) return t;
  fail(ErrorKind::invalid_input, "energy report has no term " + index_name({m1, m2, n}));
}

int default_diagnostic_order(double alpha, const GridSpec& grid) {
  const int full = 2 * static_cast<int>(std::ceil(alpha)) + 9;
  return std::min(full, grid.planar_symmetric() ? 8 : 4);
}

void require_stencil(const GridSpec& grid, const std::array<int, 3>& orders) {
  for (int a = 0; a < 3; ++a) {
    if (orders[a] < 0) fail(ErrorKind::invalid_input, "negative derivative order " + index_name(orders));
    if (orders[a] == 0 || grid.shape[a] == 1) continue;
    if (grid.shape[a] < static_cast<std::size_t>(2 * orders[a] + 1))
      fail(ErrorKind::invalid_input, "grid axis " + std::to_string(a + 1) + " has " + std::to_string(grid.shape[a]) +
                                         " nodes, too few for the derivative " + index_name(orders));
  }
}

EnergyReport energy_functionals(const FlowState& state, const DeformationData& defo, const CoefficientData& coeffs,
                                const CurlStructure& cs, const WeightField& w, const ThermoParams& params, int N,
                                Exec exec) {
  if (N < 0) fail(ErrorKind::invalid_input, "diagnostic order must be >= 0");
  const GridSpec& grid = defo.grid();
  const double a = params.alpha;
  const bool planar = grid.planar_symmetric();
  const auto indices = multi_indices(N);
  for (const auto& o : indices)
    if (!(planar && tangential(o))) require_stencil(grid, o);

  EnergyReport rep;
  rep.time = state.time;
  rep.order = N;
  rep.full_order = 2.0 * a + 9.0;

  const TensorField curl_chi = lagrangian_curl_matrix(kernels::gradient(coeffs.chi, exec), defo, exec);
  std::vector<double> jp(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) jp[n] = jacobian_power(defo.J(0, n), a);

  std::vector<double> fI(grid.size()), fII(grid.size()), fIII(grid.size()), fIV(grid.size());
  for (const auto& o : indices) {
    EnergyTerm term;
    term.index = o;
    if (planar && tangential(o)) {
      rep.terms.push_back(term);
      continue;
    }
    const int n3 = o[2];
    const auto wI = weight_power(w, a + n3);
    const auto wII = weight_power(w, a + n3 + 1.0);

    const VectorField dv = derivative(state.eta_t, o, exec);
    const VectorField deta = map_derivative(state.eta, defo.D_eta, o, exec);
    const TensorField grad = (o == std::array<int, 3>{0, 0, 0}) ? defo.D_eta : kernels::gradient(deta, exec);
    TensorField dcurl(grid);
    for (std::size_t c = 0; c < 9; ++c) dcurl.raw(c) = kernels::mixed_partial(curl_chi[c], grid, o, exec);

    kernels::for_each_node(exec, grid.size(), [&](std::size_t n) {
      const Vec3 u = dv.at(n);
      double q = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q += u[j] * coeffs.B(i * 3 + j, n) * u[i];
      fI[n] = wI[n] * q;

      const Mat3 M = mat3::mul(grad.at(n), defo.A.at(n));
      const double div = M[0] + M[4] + M[8];
      fII[n] = wII[n] * jp[n] * div * div;

      const Mat3 MU = mat3::mul(M, cs.U.at(n));
      double g = 0.0;
      for (int k = 0; k < 9; ++k) g += MU[k] * M[k];
      fIII[n] = wII[n] * g;

      double c2 = 0.0;
      for (int k = 0; k < 9; ++k) c2 += dcurl(k, n) * dcurl(k, n);
      fIV[n] = wII[n] * c2;
    });
    term.E_I = kernels::integrate(fI, grid);
    term.E_II = kernels::integrate(fII, grid);
    term.E_III = kernels::integrate(fIII, grid);
    term.E_IV = kernels::integrate(fIV, grid);
    rep.terms.push_back(term);
  }
  for (const auto& t : rep.terms) {
    rep.E_I += t.E_I;
    rep.E_II += t.E_II;
    rep.E_III += t.E_III;
    rep.E_IV += t.E_IV;
  }
  rep.E_total = rep.E_I + rep.E_III + rep.E_IV;
  rep.apriori = apriori_monitor(state, defo, w, N, exec);
  return rep;
}

std::vector<AprioriEntry> apriori_monitor(const FlowState& state, const DeformationData& defo, const WeightField& w,
                                          int N, Exec exec) {
  const GridSpec& grid = defo.grid();
  const TensorField Gv = kernels::gradient(state.eta_t, exec);
  std::vector<AprioriEntry> out;
  auto table = [&](const TensorField& G, int limit, bool velocity) {
    if (limit < 0) return;
    for (const auto& o : multi_indices(limit)) {
      require_stencil(grid, {o[0], o[1], o[2] + 1});
      const auto wq = weight_power(w, 0.5 * o[2]);
      double m = 0.0;
      for (std::size_t c = 0; c < 9; ++c) {
        const auto d = kernels::mixed_partial(G[c], grid, o, exec);
        for (std::size_t n = 0; n < d.size(); ++n) m = std::max(m, std::abs(wq[n] * d[n]));
      }
      out.push_back({o, velocity, m});
    }
  };
  table(defo.D_eta, N / 2, false);
  table(Gv, N / 2 - 1, true);
  return out;
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& g,
                                        const std::function<double(double)>& dg, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  if (panels < 1) fail(ErrorKind::invalid_input, "need at least one panel");
  SampledFunction f;
  f.g0 = g(0.0);
  // Geometric panels [2^-(k+1), 2^-k], plus [0, 2^-panels].
  std::vector<double> edges{0.0};
  for (int k = panels; k >= 0; --k) edges.push_back(std::ldexp(1.0, -k));
  const auto& x = Rule::abscissa();
  const auto& wt = Rule::weights();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double s = mid + sign * half * x[i];
        f.s.push_back(s);
        f.weight.push_back(half * wt[i]);
        f.g.push_back(g(s));
        f.dg.push_back(dg(s));
      }
    }
  }
  return f;
}

HardyResult hardy_check(const SampledFunction& f, double k) {
  if (k == 1.0) fail(ErrorKind::unsupported_exponent, "Hardy inequality has no k = 1 branch");
  if (f.s.empty()) fail(ErrorKind::invalid_input, "Hardy check needs samples");
  HardyResult r;
  for (std::size_t i = 0; i < f.s.size(); ++i) {
    const double s = f.s[i];
    const double g = f.g[i];
    const double dg = f.dg[i];
    if (k > 1.0) {
      r.lhs += f.weight[i] * std::pow(s, k - 2.0) * g * g;
      r.rhs += f.weight[i] * std::pow(s, k) * (g * g + dg * dg);
    } else {
      const double d = g - f.g0;
      r.lhs += f.weight[i] * std::pow(s, k - 2.0) * d * d;
      r.rhs += f.weight[i] * std::pow(s, k) * dg * dg;
    }
  }
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? INFINITY : 0.0);
  return r;
}

WeightedNorms weighted_space_norms(const ScalarField& F, const WeightField& w, const DeformationData& defo,
                                   double alpha, int b, Exec exec) {
  if (b < 0) fail(ErrorKind::invalid_input, "norm order must be >= 0");
  const GridSpec& grid = F.grid();
  require_same_grid(F, w.w, "weighted_space_norms");
  double X2 = 0.0, Y2 = 0.0, Z2 = 0.0;
  std::vector<double> fx(grid.size()), fy(grid.size()), fz(grid.size());
  for (const auto& o : multi_indices(b)) {
    if (grid.planar_symmetric() && tangential(o)) continue;
    require_stencil(grid, {o[0], o[1], o[2] + 1});
    const auto d = kernels::mixed_partial(F[0], grid, o, exec);
    ScalarField dF(grid);
    dF.raw(0) = d;
    const VectorField g = kernels::gradient(dF, exec);
    const auto wx = weight_power(w, alpha + o[2]);
    const auto wz = weight_power(w, alpha + o[2] + 1.0);
    kernels::for_each_node(exec, grid.size(), [&](std::size_t n) {
      double y = 0.0;
      for (int r = 0; r < 3; ++r) {
        double c = 0.0;
        for (int s = 0; s < 3; ++s) c += defo.A(s * 3 + r, n) * g(s, n);
        y += c * c;
      }
      fx[n] = wx[n] * d[n] * d[n];
      fz[n] = wz[n] * d[n] * d[n];
      fy[n] = wz[n] * y;
    });
    X2 += kernels::integrate(fx, grid);
    Y2 += kernels::integrate(fy, grid);
    Z2 += kernels::integrate(fz, grid);
  }
  WeightedNorms out{std::sqrt(X2), std::sqrt(Y2), std::sqrt(Z2), 0.0};
  const double sup = kernels::max_abs(F[0]);
  out.sup_ratio = out.X > 0.0 ? sup / out.X : 0.0;
  return out;
}

std::vector<EnergyInequalityMonitor::Sample> EnergyInequalityMonitor::rates(
    std::span<const EnergyReport> reports) const {
  std::vector<Sample> out;
  const std::size_t K = reports.size();
  if (K < 2) return out;
  const double weight = 1.0 + 1.0 / alpha_;
  auto quantity = [&](std::size_t k, int n) {
    const auto& t = reports[k].term(0, 0, n);
    return t.E_I + weight * t.E_II;
  };
  const int nmax = std::min(max_n_, reports[0].order);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == K ? k : k + 1;
    const double dt = reports[hi].time - reports[lo].time;
    Sample s;
    s.time = reports[k].time;
    s.energy = reports[k].E_I + reports[k].E_III;
    s.rate = -INFINITY;
    for (int n = 0; n <= nmax; ++n) s.rate = std::max(s.rate, (quantity(hi, n) - quantity(lo, n)) / dt);
    out.push_back(s);
  }
  return out;
}

void EnergyInequalityMonitor::calibrate(std::span<const EnergyReport> reports) {
  const auto samples = rates(reports);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& s : samples) {
    if (!(s.rate > 0.0)) continue;
    const double x = std::log1p(s.energy), y = std::log(s.rate);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  double c1 = 0.0;
  if (count >= 2) {
    const double var = sxx - sx * sx / count;
    if (var > 1e-300) c1 = std::max(0.0, (sxy - sx * sy / count) / var);
  }
  double envelope = 0.0;
  for (const auto& s : samples)
    if (s.rate > 0.0) envelope = std::max(envelope, s.rate / std::pow(1.0 + s.energy, c1));
  c0_ = 2.0 * envelope;
  c1_ = c1;
  calibrated_ = true;
}

double EnergyInequalityMonitor::bound(double energy) const { return c0_ * std::pow(1.0 + energy, c1_); }

std::vector<EnergyInequalityMonitor::Event> EnergyInequalityMonitor::check(
    std::span<const EnergyReport> reports) const {
  if (!calibrated_) fail(ErrorKind::invalid_input, "energy inequality monitor used before calibration");
  std::vector<Event> events;
  for (const auto& s : rates(reports)) {
    const double b = bound(s.energy);
    if (s.rate > b) events.push_back({s.time, s.rate, b});
  }
  return events;
}

}  // namespace lagvac
