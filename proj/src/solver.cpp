#include "lagvac/solver.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lagvac {

namespace {

constexpr double kMinJ = 1e-6;
constexpr double kMaxBeta = 1.0 - 1e-9;

using Expr = Expression;
using Var = Expression::Var;

// Forcing that makes a prescribed eta3(t, x3) exact, divided by the node mass
// density and rescaled to the scheme's normalisation.
struct Forcing {
  Expr J, Jx, v, vx, a;
  Expr w, dw;
  ThermoParams params;

  double operator()(double t, double x) const {
    const double g = params.gamma;
    const double al = params.alpha;
    const double eps2 = params.eps2();
    const double Jv = J(0, 0, x, t);
    const double vv = v(0, 0, x, t);
    const double beta2 = eps2 * vv * vv;
    if (!(beta2 < 1.0)) fail(ErrorKind::superluminal, "manufactured solution is superluminal");
    const double G = 1.0 / std::sqrt(1.0 - beta2);
    const double wv = w(0, 0, x, t);
    const double h = (1.0 + al) * wv * std::pow(G * Jv, -1.0 / al);
    const double B = ((1.0 + eps2 * h) + (1.0 + (1.0 - 1.0 / al) * eps2 * h) * eps2 * G * G * vv * vv) *
                     std::pow(G, 2.0 + 1.0 / al);
    const double C = -2.0 * g * eps2 * G * G * std::pow(Jv, -1.0 / al) * vv / Jv;
    const double q = B * a(0, 0, x, t) + wv * C * vx(0, 0, x, t) + (1.0 + al) * dw(0, 0, x, t) * std::pow(Jv, -g) -
                     g * wv * std::pow(Jv, -g - 1.0) * Jx(0, 0, x, t);
    return q * std::pow(G, -g);
  }
};

// Staggered discretisation: positions and velocities at nodes, strain at cells.
class Scheme {
 public:
  Scheme(const SolverConfig& cfg, const WeightField& wf) : p_(cfg.params), exec_(cfg.exec) {
    n_ = cfg.n3;
    h_ = 1.0 / static_cast<double>(n_ - 1);
    const double a = p_.alpha;
    m_.resize(n_);
    W_.resize(n_ - 1);
    using Rule = boost::math::quadrature::gauss<double, 12>;
    for (std::size_t i = 0; i < n_; ++i) {
      const double xi = static_cast<double>(i) * h_;
      const double lo = std::max(0.0, xi - 0.5 * h_), hi = std::min(1.0, xi + 0.5 * h_);
      m_[i] = Rule::integrate([&](double s) { return std::pow(std::max(0.0, wf.profile({0.0, 0.0, s})), a); }, lo, hi);
    }
    for (std::size_t c = 0; c + 1 < n_; ++c) {
      const double xc = (static_cast<double>(c) + 0.5) * h_;
      W_[c] = h_ * std::pow(wf.profile({0.0, 0.0, xc}), 1.0 + a);
    }
    zeta_.resize(n_ - 1);
    T_.resize(n_ - 1);
    Qc_.resize(n_ - 1);
    Qdc_.resize(n_ - 1);
    Gg_.resize(n_);
  }

  void set_forcing(Forcing f) {
    forcing_ = std::move(f);
    fx_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) fx_[i] = static_cast<double>(i) * h_;
  }

  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return h_; }

  // Acceleration of the nodes at (eta, v, t).
  void acceleration(double t, const std::vector<double>& eta, const std::vector<double>& v, std::vector<double>& acc) {
    const double g = p_.gamma;
    const double a = p_.alpha;
    const double eps2 = p_.eps2();
    const std::size_t nc = n_ - 1;
    kernels::for_each_node(exec_, n_, [&](std::size_t i) {
      Gg_[i] = eps2 == 0.0 ? 1.0 : std::pow(1.0 - eps2 * v[i] * v[i], 0.5 * g);
    });
    kernels::for_each_node(exec_, nc, [&](std::size_t c) {
      const double z = (eta[c + 1] - eta[c]) / h_;
      zeta_[c] = z;
      const double lz = std::log(z);
      const double zg = std::exp(-g * lz);
      T_[c] = 0.5 * W_[c] * zg * (Gg_[c] + Gg_[c + 1]) / h_;
      Qc_[c] = a * 0.5 * W_[c] * std::exp(-lz / a);
      Qdc_[c] = -0.5 * W_[c] * zg * (v[c + 1] - v[c]) / h_;
    });
    kernels::for_each_node(exec_, n_, [&](std::size_t i) {
      const double F = (i > 0 ? T_[i - 1] : 0.0) - (i < nc ? T_[i] : 0.0);
      double rhs = F;
      double dpdv = m_[i];
      if (eps2 > 0.0) {
        const double Q = (i > 0 ? Qc_[i - 1] : 0.0) + (i < nc ? Qc_[i] : 0.0);
        const double Qd = (i > 0 ? Qdc_[i - 1] : 0.0) + (i < nc ? Qdc_[i] : 0.0);
        const double G = 1.0 / std::sqrt(1.0 - eps2 * v[i] * v[i]);
        const double G2g = std::pow(G, 2.0 - g);
        dpdv = m_[i] * G * G * G + g * eps2 * Q * G2g * (1.0 + (2.0 - g) * eps2 * G * G * v[i] * v[i]);
        rhs -= g * eps2 * G2g * v[i] * Qd;
      }
      if (forcing_) rhs += m_[i] * (*forcing_)(t, fx_[i]);
      acc[i] = rhs / dpdv;
    });
  }

  double energy(const std::vector<double>& eta, const std::vector<double>& v) const {
    const double g = p_.gamma;
    const double a = p_.alpha;
    const double eps2 = p_.eps2();
    double kin = 0.0, pot = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double Q = 0.0;
      if (i > 0) Q += a * 0.5 * W_[i - 1] * std::pow((eta[i] - eta[i - 1]) / h_, -1.0 / a);
      if (i + 1 < n_) Q += a * 0.5 * W_[i] * std::pow((eta[i + 1] - eta[i]) / h_, -1.0 / a);
      const double G = eps2 == 0.0 ? 1.0 : 1.0 / std::sqrt(1.0 - eps2 * v[i] * v[i]);
      kin += m_[i] * G * G * v[i] * v[i] / (G + 1.0);
      pot += Q * std::pow(G, -g) * (g * G * G - g + 1.0);
    }
    return kin + pot;
  }

  double min_strain(const std::vector<double>& eta) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c + 1 < n_; ++c) m = std::min(m, (eta[c + 1] - eta[c]) / h_);
    return m;
  }

 private:
  ThermoParams p_;
  Exec exec_;
  std::size_t n_ = 0;
  double h_ = 0.0;
  std::vector<double> m_, W_;
  std::vector<double> zeta_, T_, Qc_, Qdc_, Gg_;
  std::optional<Forcing> forcing_;
  std::vector<double> fx_;
};

std::string describe(double t, const std::string& what) {
  std::ostringstream os;
  os.precision(10);
  os << what << " at t = " << t;
  return os.str();
}

FlowState make_state(const GridSpec& grid, double t, const std::vector<double>& eta, const std::vector<double>& v,
                     const std::vector<double>& acc) {
  FlowState s;
  s.time = t;
  s.eta = VectorField(grid);
  s.eta_t = VectorField(grid);
  s.eta_tt = VectorField(grid);
  s.eta.raw(2) = eta;
  s.eta_t.raw(2) = v;
  s.eta_tt->raw(2) = acc;
  return s;
}

double max_abs_value(const std::vector<double>& x) { return kernels::max_abs(x); }

double vacuum_slope(const FlowState& st, const DeformationData& defo, const WeightField& wf, const ThermoParams& p) {
  const std::size_t n = defo.J.nodes();
  const ScalarField G = lorentz_field(st.eta_t, p);
  auto csq = [&](std::size_t i) {
    const double w = wf.w(0, i);
    if (w <= 0.0) return 0.0;
    return sound_speed_sq(std::pow(w, p.alpha) / (G(0, i) * defo.J(0, i)), p);
  };
  const double h = defo.grid().spacing[2];
  return std::min(std::abs(csq(1) - csq(0)) / h, std::abs(csq(n - 1) - csq(n - 2)) / h);
}

}  // namespace

void SolverConfig::validate() const {
  if (n3 < 5) fail(ErrorKind::invalid_input, "n3 must be at least 5");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail(ErrorKind::invalid_input, "cfl must lie in (0, 1]");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail(ErrorKind::invalid_input, "t_end must be finite and >= 0");
  if (!std::isfinite(output_interval)) fail(ErrorKind::invalid_input, "output_interval must be finite");
}

double max_B_deviation(const CoefficientData& coeffs) {
  double m = 0.0;
  for (std::size_t n = 0; n < coeffs.B.nodes(); ++n) {
    double s = 0.0;
    for (int c = 0; c < 9; ++c) {
      const double d = coeffs.B(c, n) - (c % 4 == 0 ? 1.0 : 0.0);
      s += d * d;
    }
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

Trajectory run(const SolverConfig& config) {
  config.validate();
  const ThermoParams& p = config.params;
  const GridSpec grid = GridSpec::planar(config.n3);
  const WeightField wf = make_weight(config.weight, grid);
  Scheme scheme(config, wf);
  const std::size_t n = scheme.size();
  const double h = scheme.h();

  Expr eta0 = Expr::parse(config.eta0);
  Expr eta1 = Expr::parse(config.eta1);
  if (config.exact_solution) {
    const Expr ex = Expr::parse(*config.exact_solution);
    Forcing f;
    f.J = ex.derivative(Var::x3);
    f.Jx = f.J.derivative(Var::x3);
    f.v = ex.derivative(Var::t);
    f.vx = f.v.derivative(Var::x3);
    f.a = f.v.derivative(Var::t);
    f.w = config.weight.expression();
    f.dw = f.w.derivative(Var::x3);
    f.params = p;
    scheme.set_forcing(f);
    eta0 = ex;
    eta1 = f.v;
  }

  std::vector<double> eta(n), v(n), acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * h;
    eta[i] = eta0(0, 0, x, 0.0);
    v[i] = eta1(0, 0, x, 0.0);
    if (!std::isfinite(eta[i]) || !std::isfinite(v[i]))
      fail(ErrorKind::invalid_input, "initial data is not finite at node " + std::to_string(i));
    if (p.eps * std::abs(v[i]) >= 1.0)
      throw NodeError(ErrorKind::superluminal, i, "initial velocity is superluminal");
  }
  if (!(scheme.min_strain(eta) > 0.0)) fail(ErrorKind::invalid_input, "initial flow map must have J > 0");

  // Time step from the initial interior sound speed.
  double cmax = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double G = p.eps == 0.0 ? 1.0 : 1.0 / std::sqrt(1.0 - p.eps2() * v[i] * v[i]);
    const double J = 0.5 * (eta[i + 1] - eta[i - 1]) / h;
    const double N = std::pow(wf.w(0, i), p.alpha) / (G * J);
    cmax = std::max(cmax, std::sqrt(sound_speed_sq(N, p)));
  }
  const double dt0 = config.cfl * h / cmax;
  std::size_t n_out = 0, per_out = 0;
  double dt = 0.0;
  if (config.t_end > 0.0) {
    const double interval0 = config.output_interval > 0.0 ? std::min(config.output_interval, config.t_end) : config.t_end;
    n_out = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.t_end / interval0)));
    const double interval = config.t_end / static_cast<double>(n_out);
    per_out = static_cast<std::size_t>(std::ceil(interval / dt0 - 1e-12));
    dt = interval / static_cast<double>(per_out);
  }

  Trajectory traj;
  traj.config = config;
  traj.dt = dt;
  const int order = config.diagnostic_order >= 0 ? config.diagnostic_order : default_diagnostic_order(p.alpha, grid);
  double E0 = 0.0;
  double slope_lo = 0.0, slope_hi = 0.0;

  auto record = [&](double t) {
    scheme.acceleration(t, eta, v, acc);
    FlowState st = make_state(grid, t, eta, v, acc);
    const DeformationData defo = compute_deformation(st, config.exec);
    const CoefficientData coeffs = assemble_coefficients(st, defo, wf, p, config.exec);
    MonitorRow row;
    row.t = t;
    row.discrete_energy = scheme.energy(eta, v);
    if (traj.log.empty()) E0 = row.discrete_energy;
    row.energy_drift = std::abs(row.discrete_energy - E0) / std::max(std::abs(E0), 1e-300);
    row.min_J = scheme.min_strain(eta);
    row.max_eps_v = p.eps * max_abs_value(v);
    row.g0_defect = number_density_defect(st, defo, wf, p);
    row.chi_h_res = max_norm(chi_h_residual(st, defo, coeffs, p, config.exec));
    row.max_curl_chi = max_abs(lagrangian_curl_matrix(kernels::gradient(coeffs.chi, config.exec), defo, config.exec));
    row.vacuum_slope = vacuum_slope(st, defo, wf, p);
    if (config.energy_reports) {
      const CurlStructure cs = assemble_curl_structure(st, defo, coeffs, p, nullptr, config.exec);
      EnergyReport rep = energy_functionals(st, defo, coeffs, cs, wf, p, order, config.exec);
      row.E_I = rep.E_I;
      row.E_II = rep.E_II;
      row.E_III = rep.E_III;
      row.E_IV = rep.E_IV;
      row.E_total = rep.E_total;
      traj.reports.push_back(std::move(rep));
    }
    if (traj.log.empty()) {
      slope_lo = 0.25 * row.vacuum_slope;
      slope_hi = 4.0 * row.vacuum_slope;
    } else if (row.vacuum_slope < slope_lo || row.vacuum_slope > slope_hi) {
      traj.events.push_back(describe(t, "vacuum sound-speed slope " + std::to_string(row.vacuum_slope) +
                                            " left the bracket [" + std::to_string(slope_lo) + ", " +
                                            std::to_string(slope_hi) + "]"));
    }
    if (row.max_curl_chi > 1e-12)
      traj.events.push_back(describe(t, "planar curl of chi is " + std::to_string(row.max_curl_chi)));
    traj.log.push_back(row);
    traj.states.push_back(std::move(st));
  };

  record(0.0);

  std::vector<double> k1e(n), k1v(n), k2e(n), k2v(n), k3e(n), k3v(n), k4e(n), k4v(n), te(n), tv(n);
  const double eps = p.eps;
  std::size_t step = 0;
  for (std::size_t o = 0; o < n_out; ++o) {
    for (std::size_t s = 0; s < per_out; ++s, ++step) {
      const double t = static_cast<double>(step) * dt;
      k1e = v;
      scheme.acceleration(t, eta, v, k1v);
      for (std::size_t i = 0; i < n; ++i) { te[i] = eta[i] + 0.5 * dt * k1e[i]; tv[i] = v[i] + 0.5 * dt * k1v[i]; }
      k2e = tv;
      scheme.acceleration(t + 0.5 * dt, te, tv, k2v);
      for (std::size_t i = 0; i < n; ++i) { te[i] = eta[i] + 0.5 * dt * k2e[i]; tv[i] = v[i] + 0.5 * dt * k2v[i]; }
      k3e = tv;
      scheme.acceleration(t + 0.5 * dt, te, tv, k3v);
      for (std::size_t i = 0; i < n; ++i) { te[i] = eta[i] + dt * k3e[i]; tv[i] = v[i] + dt * k3v[i]; }
      k4e = tv;
      scheme.acceleration(t + dt, te, tv, k4v);
      for (std::size_t i = 0; i < n; ++i) {
        te[i] = eta[i] + dt / 6.0 * (k1e[i] + 2.0 * k2e[i] + 2.0 * k3e[i] + k4e[i]);
        tv[i] = v[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
      }

      std::string why;
      for (std::size_t i = 0; i < n && why.empty(); ++i) {
        if (!std::isfinite(te[i]) || !std::isfinite(tv[i])) why = "non-finite state at node " + std::to_string(i);
        else if (eps * std::abs(tv[i]) >= kMaxBeta) why = "superluminal velocity at node " + std::to_string(i);
      }
      if (why.empty() && !(scheme.min_strain(te) > kMinJ)) why = "Jacobian collapsed (J <= 1e-6)";
      if (!why.empty()) {
        scheme.acceleration(t, eta, v, acc);
        FlowState last = make_state(grid, t, eta, v, acc);
        traj.steps = step;
        throw SimulationAborted(describe(t + dt, "simulation aborted: " + why), std::move(traj), std::move(last));
      }
      eta.swap(te);
      v.swap(tv);
    }
    record(static_cast<double>(step) * dt);
  }
  traj.steps = step;
  return traj;
}

MmsResult mms_study(const SolverConfig& base, const std::vector<std::size_t>& n3_list) {
  if (!base.exact_solution) fail(ErrorKind::invalid_input, "MMS study needs an exact solution");
  if (n3_list.size() < 2) fail(ErrorKind::invalid_input, "MMS study needs at least two resolutions");
  const Expr ex = Expr::parse(*base.exact_solution);
  MmsResult r;
  for (std::size_t n3 : n3_list) {
    SolverConfig cfg = base;
    cfg.n3 = n3;
    cfg.energy_reports = false;
    cfg.output_interval = 0.0;
    const Trajectory tr = run(cfg);
    const FlowState& last = tr.states.back();
    double err = 0.0;
    const double hh = 1.0 / static_cast<double>(n3 - 1);
    for (std::size_t i = 0; i < n3; ++i)
      err = std::max(err, std::abs(last.eta(2, i) - ex(0, 0, static_cast<double>(i) * hh, last.time)));
    r.n3.push_back(n3);
    r.error.push_back(err);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double K = static_cast<double>(r.n3.size());
  for (std::size_t k = 0; k < r.n3.size(); ++k) {
    if (k > 0)
      r.orders.push_back(std::log(r.error[k - 1] / r.error[k]) /
                         std::log(static_cast<double>(r.n3[k] - 1) / static_cast<double>(r.n3[k - 1] - 1)));
    const double x = std::log(1.0 / static_cast<double>(r.n3[k] - 1));
    const double y = std::log(r.error[k]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  r.fitted_order = (sxy - sx * sy / K) / (sxx - sx * sx / K);
  return r;
}

std::vector<LimitRow> limit_sweep(const SolverConfig& base, const std::vector<double>& eps_list) {
  if (eps_list.empty()) fail(ErrorKind::invalid_input, "limit sweep needs at least one eps");
  for (std::size_t k = 1; k < eps_list.size(); ++k)
    if (!(eps_list[k] < eps_list[k - 1])) fail(ErrorKind::invalid_input, "eps list must be strictly descending");

  SolverConfig ref_cfg = base;
  ref_cfg.params = ThermoParams::make(base.params.gamma, 0.0);
  ref_cfg.energy_reports = false;
  const Trajectory ref = run(ref_cfg);

  std::vector<LimitRow> rows;
  for (double eps : eps_list) {
    LimitRow row;
    row.eps = eps;
    SolverConfig cfg = ref_cfg;
    cfg.params = ThermoParams::make(base.params.gamma, eps);
    try {
      const Trajectory tr = eps == 0.0 ? ref : run(cfg);
      const WeightField wf = make_weight(cfg.weight, tr.states.front().grid());
      for (std::size_t f = 0; f < tr.states.size() && f < ref.states.size(); ++f) {
        const FlowState& a = tr.states[f];
        const FlowState& b = ref.states[f];
        for (std::size_t i = 0; i < a.eta.nodes(); ++i)
          row.sup_difference = std::max(row.sup_difference, std::abs(a.eta(2, i) - b.eta(2, i)));
        const DeformationData defo = compute_deformation(a, cfg.exec);
        row.max_B_deviation =
            std::max(row.max_B_deviation, max_B_deviation(assemble_coefficients(a, defo, wf, cfg.params, cfg.exec)));
      }
    } catch (const Error& e) {
      row.aborted = true;
      row.message = e.what();
    }
    if (!rows.empty() && row.sup_difference > 0.0) row.reduction = rows.back().sup_difference / row.sup_difference;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConservedRow> conserved_monitor(const Trajectory& traj) {
  std::vector<ConservedRow> out;
  if (traj.states.empty()) return out;
  const ThermoParams& p = traj.config.params;
  const GridSpec& grid = traj.states.front().grid();
  const WeightField wf = make_weight(traj.config.weight, grid);
  const double kappa = p.eps == 0.0 ? 0.0 : energy_kappa(p);
  std::vector<double> f(grid.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const FlowState& st = traj.states[k];
    const DeformationData defo = compute_deformation(st, traj.config.exec);
    const ScalarField G = lorentz_field(st.eta_t, p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double w = wf.w(0, i);
      f[i] = 0.0;
      if (w <= 0.0) continue;
      const double J = defo.J(0, i);
      const double N = std::pow(w, p.alpha) / (G(0, i) * J);
      const double rho = energy_density(N, p);
      f[i] = energy_pair(rho, st.eta_t.at(i), p, kappa).V * J;
    }
    ConservedRow row;
    row.t = st.time;
    row.g0_defect = number_density_defect(st, defo, wf, p);
    row.relativistic_energy = kernels::integrate(f, grid);
    row.discrete_energy_drift = k < traj.log.size() ? traj.log[k].energy_drift : 0.0;
    row.chi_h_res = k < traj.log.size() ? traj.log[k].chi_h_res : 0.0;
    out.push_back(row);
  }
  return out;
}

}  // namespace lagvac
