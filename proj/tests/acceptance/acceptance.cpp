// Acceptance criteria 1-12. One PASS/FAIL line each; exit status is the
// number of failed asserted criteria (criterion 12 is a monitored bound and
// reports its event log but still prints PASS/FAIL on whether the log is empty).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lagvac/verify.hpp"

using namespace lagvac;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %2d %s  %-34s %s  [%.2fs]\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string fix(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

SolverConfig smooth_run(std::size_t n3) {
  SolverConfig c;
  c.params = ThermoParams::make(2.0, 0.0);
  c.n3 = n3;
  c.t_end = 0.5;
  c.cfl = 0.4;
  c.output_interval = 0.01;
  return c;
}

// Shared by criteria 7, 11 and 12.
Trajectory& reference_run() {
  static Trajectory traj = run(smooth_run(512));
  return traj;
}
double reference_seconds = 0.0;

}  // namespace

int main() {
  report(1, "Piola identity order", [] {
    const auto t0 = Clock::now();
    const auto s = verify::piola_study({32, 64, 128, 256});
    const double secs = seconds_since(t0);
    return Outcome{s.order >= 1.7 && s.order <= 2.3 && secs < 10.0,
                   "order " + fix(s.order) + " in [1.7, 2.3], " + fix(secs) + " s < 10 s"};
  });

  report(2, "curl identities", [] {
    const double defect = verify::curl_norm_identity_defect(64);
    const auto s = verify::gradient_curl_study({32, 64, 128, 256});
    return Outcome{defect <= 1e-12 && s.order >= 1.7,
                   "| |Curl F|^2 - 2|curl F|^2 | " + sci(defect) + " <= 1e-12, gradient curl order " + fix(s.order) +
                       " >= 1.7"};
  });

  report(3, "coefficient degenerations", [] {
    const GridSpec g = GridSpec::slab(6, 6, 13);
    const WeightField w = make_weight(WeightProfile::parabolic(), g);
    FlowState moving = FlowState::identity(g);
    moving.eta = verify::perturbed_identity(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
      const auto x = g.position(n);
      moving.eta_t.set(n, {0.3 * std::sin(6.283185307179586 * x[1]), 0.2 * x[2], -0.4 * x[2] * (1 - x[2])});
    }
    moving.eta_tt = VectorField(g);
    bool eps0 = true;
    {
      const DeformationData d = compute_deformation(moving);
      const CoefficientData c = assemble_coefficients(moving, d, w, ThermoParams::make(1.5, 0.0));
      for (std::size_t n = 0; n < g.size(); ++n) {
        for (int k = 0; k < 9; ++k) eps0 = eps0 && c.B(k, n) == (k % 4 == 0 ? 1.0 : 0.0);
        for (int k = 0; k < 27; ++k) eps0 = eps0 && c.C(k, n) == 0.0;
      }
    }
    bool rest = true;
    {
      FlowState s = moving;
      s.eta_t = VectorField(g);
      const ThermoParams p = ThermoParams::make(1.5, 0.7);
      const DeformationData d = compute_deformation(s);
      const CoefficientData c = assemble_coefficients(s, d, w, p);
      const CurlStructure cs = assemble_curl_structure(s, d, c, p);
      for (std::size_t n = 0; n < g.size(); ++n) {
        for (int k = 0; k < 27; ++k) rest = rest && c.C(k, n) == 0.0;
        for (int k = 0; k < 9; ++k) {
          const double id = k % 4 == 0 ? 1.0 : 0.0;
          rest = rest && cs.S(k, n) == id && cs.U(k, n) == id && cs.R(k, n) == 0.0;
        }
      }
    }
    return Outcome{eps0 && rest, std::string("eps=0: B=delta, C=0 ") + (eps0 ? "bitwise" : "VIOLATED") +
                                     "; rest: C=0, S=U=I, R=0 " + (rest ? "bitwise" : "VIOLATED")};
  });

  report(4, "det S = Gamma^2", [] {
    const auto r = verify::det_s_samples(10000);
    return Outcome{r.samples == 10000 && r.det_defect <= 1e-12 && r.inverse_defect <= 1e-12,
                   std::to_string(r.samples) + " samples, |det S - Gamma^2|/Gamma^2 " + sci(r.det_defect) +
                       ", |U S - I| " + sci(r.inverse_defect) + " (<= 1e-12)"};
  });

  report(5, "identity-state energies", [] {
    const GridSpec g = GridSpec::planar(256);
    FlowState s = FlowState::identity(g);
    s.eta_tt = VectorField(g);
    const ThermoParams p = ThermoParams::make(2.0, 0.0);
    const WeightField w = make_weight(WeightProfile::parabolic(), g);
    const DeformationData d = compute_deformation(s);
    const CoefficientData c = assemble_coefficients(s, d, w, p);
    const CurlStructure cs = assemble_curl_structure(s, d, c, p);
    const auto& t = energy_functionals(s, d, c, cs, w, p, 0).term(0, 0, 0);
    const double e2 = std::abs(t.E_II - 0.3), e3 = std::abs(t.E_III - 0.1);
    return Outcome{e2 <= 1e-4 && e3 <= 1e-4, "|E_II - 0.3| " + sci(e2) + ", |E_III - 0.1| " + sci(e3) + " (<= 1e-4)"};
  });

  report(6, "Hardy inequality checks", [] {
    const double pi = 3.141592653589793;
    const std::vector<SampledFunction> family{
        SampledFunction::sample([](double) { return 1.0; }, [](double) { return 0.0; }),
        SampledFunction::sample([](double s) { return s; }, [](double) { return 1.0; }),
        SampledFunction::sample([](double s) { return s * s; }, [](double s) { return 2.0 * s; }),
        SampledFunction::sample([pi](double s) { return std::sin(pi * s); },
                                [pi](double s) { return pi * std::cos(pi * s); })};
    double worst = 0.0;
    bool finite = true;
    for (const auto& f : family) {
      const double r = hardy_check(f, 2.0).ratio;
      finite = finite && std::isfinite(r);
      worst = std::max(worst, r);
    }
    const HardyResult one = hardy_check(family[0], 2.0);
    const double oracle = std::max(std::abs(one.lhs - 1.0), std::abs(one.rhs - 1.0 / 3.0));
    return Outcome{finite && worst <= 10.0 && oracle <= 1e-10,
                   "max ratio " + fix(worst) + " <= 10, g=1 oracle error " + sci(oracle) + " <= 1e-10"};
  });

  report(7, "eps=0 energy conservation", [] {
    const auto t0 = Clock::now();
    const Trajectory& tr = reference_run();
    reference_seconds = seconds_since(t0);
    double drift = 0.0;
    for (const auto& r : tr.log) drift = std::max(drift, r.energy_drift);
    return Outcome{drift < 1e-6 && reference_seconds < 60.0 && tr.log.back().t == 0.5,
                   "n3=512 max drift " + sci(drift) + " < 1e-6, " + std::to_string(tr.steps) + " steps, " +
                       fix(reference_seconds) + " s < 60 s"};
  });

  report(8, "MMS convergence", [] {
    const auto t0 = Clock::now();
    std::string detail;
    bool ok = true;
    for (double eps : {0.0, 0.2}) {
      SolverConfig c;
      c.params = ThermoParams::make(2.0, eps);
      c.t_end = 1.0;
      c.exact_solution = "x3 + 0.01*sin(t)*x3*(1-x3)";
      const MmsResult r = mms_study(c, {64, 128, 256, 512});
      ok = ok && r.fitted_order >= 1.7 && r.fitted_order <= 2.3;
      detail += "eps=" + fix(eps) + " order " + fix(r.fitted_order) + "; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 300.0;
    return Outcome{ok, detail + "in [1.7, 2.3], " + fix(secs) + " s < 300 s"};
  });

  report(9, "conservation laws", [] {
    auto relativistic = [](double cfl) {
      SolverConfig c;
      c.params = ThermoParams::make(2.0, 0.2);
      c.n3 = 128;
      c.t_end = 0.5;
      c.cfl = cfl;
      c.eta1 = "0.5*sin(pi*x3)";
      c.output_interval = 0.5;
      c.energy_reports = false;
      return conserved_monitor(run(c));
    };
    const auto a = relativistic(0.8), b = relativistic(0.4);
    const double g0_start = a.front().g0_defect, g0_end = a.back().g0_defect;
    auto drift = [](const std::vector<ConservedRow>& rows) {
      return std::abs(rows.back().relativistic_energy - rows.front().relativistic_energy) /
             std::abs(rows.front().relativistic_energy);
    };
    const double ta = drift(a), tb = drift(b);
    const double da = a.back().discrete_energy_drift, db = b.back().discrete_energy_drift;
    const double ratio = da / db;
    return Outcome{g0_start <= 1e-10 && g0_end <= 1e-7 && ratio >= 8.0,
                   "g0 defect " + sci(g0_start) + " (t=0), " + sci(g0_end) + " (t=0.5); energy drift " + sci(da) +
                       " -> " + sci(db) + " under dt halving, ratio " + fix(ratio) +
                       " >= 8; node-trapezoid int VJ drift " + sci(ta) + " -> " + sci(tb) + " (quadrature floor)"};
  });

  report(10, "non-relativistic limit", [] {
    SolverConfig c;
    c.n3 = 128;
    c.t_end = 0.5;
    c.output_interval = 0.05;
    c.eta1 = "0.5*sin(pi*x3)";
    c.energy_reports = false;
    const auto rows = limit_sweep(c, {0.4, 0.2, 0.1, 0.05});
    bool decreasing = true;
    for (std::size_t k = 0; k < rows.size(); ++k)
      decreasing = decreasing && !rows[k].aborted && (k == 0 || rows[k].sup_difference < rows[k - 1].sup_difference);
    // c from a least-squares fit of |B - delta| = c eps^2 over the three largest eps.
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      num += rows[k].max_B_deviation * rows[k].eps * rows[k].eps;
      den += std::pow(rows[k].eps, 4);
    }
    const double cfit = num / den;
    const auto& last = rows.back();
    const double curve = cfit * last.eps * last.eps;
    const bool bounded = last.max_B_deviation <= 2.0 * curve && last.max_B_deviation >= curve / 2.0;
    std::string sups;
    for (const auto& r : rows) sups += sci(r.sup_difference) + " ";
    return Outcome{decreasing && bounded, "sup differences " + sups + (decreasing ? "strictly decreasing" : "NOT decreasing") +
                                              "; |B - delta|(0.05) " + sci(last.max_B_deviation) + " vs c eps^2 " +
                                              sci(curve) + " (c = " + fix(cfit) + ", factor 2)"};
  });

  report(11, "planar vorticity", [] {
    const Trajectory& tr = reference_run();
    double worst = 0.0;
    for (const auto& r : tr.log) worst = std::max(worst, r.max_curl_chi);
    return Outcome{worst <= 1e-8, "max |Curl chi| over t in [0, 0.5] " + sci(worst) + " <= 1e-8"};
  });

  report(12, "monitored energy inequality", [] {
    const Trajectory calib = run(smooth_run(256));
    EnergyInequalityMonitor mon(calib.config.params.alpha);
    mon.calibrate(calib.reports);
    const Trajectory& tr = reference_run();
    const auto events = mon.check(tr.reports);
    for (const auto& e : events)
      std::printf("    event t=%.4f rate %.4e > bound %.4e\n", e.time, e.rate, e.bound);
    return Outcome{events.empty(), "majorant c0 (1+E)^c1 with c0 = " + sci(mon.c0()) + ", c1 = " + fix(mon.c1()) +
                                       " (fitted at n3=256); " + std::to_string(events.size()) +
                                       " events along the n3=512 run"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
