// lagvac: command-line front end for the planar vacuum solver and its checks.
//
//   lagvac simulate --config run.json
//   lagvac verify [--config run.json] [selector...]
//   lagvac energy --checkpoint out/final.json [--order N]
//   lagvac mms --config mms.json
//   lagvac limit --config limit.json
//
// Exit status: 0 success, 1 a check or study failed, 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "lagvac/io.hpp"
#include "lagvac/verify.hpp"

namespace fs = std::filesystem;
using namespace lagvac;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

io::RunConfig config_or_default(const std::string& path) {
  if (path.empty()) return io::RunConfig{};
  return io::load_run_config(path);
}

void print_params(const io::RunConfig& rc) {
  const auto& s = rc.solver;
  std::printf("# gamma=%s eps=%s alpha=%s n3=%zu weight=%s cfl=%s t_end=%s\n", io::format_double(s.params.gamma).c_str(),
              io::format_double(s.params.eps).c_str(), io::format_double(s.params.alpha).c_str(), s.n3,
              rc.weight_spec.c_str(), io::format_double(s.cfl).c_str(), io::format_double(s.t_end).c_str());
  if (s.params.outside_analysed_range()) std::printf("# note: gamma outside (1, 2), the range covered by the estimates\n");
}

int cmd_simulate(const io::RunConfig& rc, const std::optional<std::string>& out_override) {
  print_params(rc);
  const fs::path dir = io::output_directory(out_override ? fs::path(*out_override) : rc.output_dir);
  fs::create_directories(dir);

  Trajectory traj;
  int status = kOk;
  try {
    traj = run(rc.solver);
  } catch (const SimulationAborted& e) {
    std::fprintf(stderr, "simulation aborted: %s\n", e.what());
    traj = e.partial();
    status = kFailed;
  }
  if (!traj.log.empty()) io::write_energy_csv(dir / "energy.csv", traj.log);
  if (!traj.states.empty())
    io::write_checkpoint(dir / "final", io::Checkpoint{traj.states.back(), rc.solver.params, rc.weight_spec});

  std::printf("%-10s %-14s %-14s %-14s %-12s %-12s\n", "t", "E_total", "energy_drift", "g0_defect", "min_J", "max_eps_v");
  for (const auto& r : traj.log)
    std::printf("%-10.4f %-14.6e %-14.6e %-14.6e %-12.6f %-12.6f\n", r.t, r.E_total, r.energy_drift, r.g0_defect, r.min_J,
                r.max_eps_v);
  std::printf("steps=%zu dt=%.6e\n", traj.steps, traj.dt);
  for (const auto& ev : traj.events) std::printf("event: %s\n", ev.c_str());
  std::printf("wrote %s\n", dir.string().c_str());
  return status;
}

int cmd_verify(const io::RunConfig& rc, const std::vector<std::string>& selectors) {
  std::vector<std::string> chosen = selectors.empty() ? rc.verify : selectors;
  for (const auto& s : chosen) {
    bool known = false;
    for (const auto& c : verify::registry()) known = known || c.name == s || c.group == s;
    if (!known) {
      std::fprintf(stderr, "unknown check or group: %s\n", s.c_str());
      return kUsage;
    }
  }
  const auto results = verify::run_suite(chosen);
  int failed = 0;
  std::printf("%-36s %-6s %-12s %s\n", "check", "result", "measured", "criterion");
  for (const auto& r : results) {
    std::printf("%-36s %-6s %-12.4e %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.measured, r.criterion.c_str());
    if (!r.detail.empty()) std::printf("%-36s %-6s %s\n", "", "", r.detail.c_str());
    failed += r.passed ? 0 : 1;
  }
  std::printf("%zu checks, %d failed\n", results.size(), failed);
  return failed == 0 ? kOk : kFailed;
}

int cmd_energy(const std::string& header, int order) {
  const io::Checkpoint cp = io::read_checkpoint(header);
  if (!cp.state.eta_tt) fail(ErrorKind::invalid_input, "checkpoint " + header + " carries no acceleration field");
  const GridSpec& grid = cp.state.grid();
  const WeightField w = make_weight(io::weight_from_spec(cp.weight_spec), grid);
  const DeformationData d = compute_deformation(cp.state);
  const CoefficientData c = assemble_coefficients(cp.state, d, w, cp.params);
  const CurlStructure cs = assemble_curl_structure(cp.state, d, c, cp.params);
  const int N = order >= 0 ? order : default_diagnostic_order(cp.params.alpha, grid);
  const EnergyReport rep = energy_functionals(cp.state, d, c, cs, w, cp.params, N);

  std::printf("# t=%s N=%d (full order %s)\n", io::format_double(rep.time).c_str(), rep.order,
              io::format_double(rep.full_order).c_str());
  std::printf("%-12s %-14s %-14s %-14s %-14s\n", "m1,m2,n", "E_I", "E_II", "E_III", "E_IV");
  for (const auto& t : rep.terms) {
    const std::string idx = std::to_string(t.index[0]) + "," + std::to_string(t.index[1]) + "," + std::to_string(t.index[2]);
    std::printf("%-12s %-14.6e %-14.6e %-14.6e %-14.6e\n", idx.c_str(), t.E_I, t.E_II, t.E_III, t.E_IV);
  }
  std::printf("%-12s %-14.6e %-14.6e %-14.6e %-14.6e\n", "total", rep.E_I, rep.E_II, rep.E_III, rep.E_IV);
  std::printf("E_N = %.6e\n", rep.E_total);
  double worst = 0.0;
  for (const auto& a : rep.apriori) worst = std::max(worst, a.value);
  std::printf("a priori sup = %.6e over %zu entries\n", worst, rep.apriori.size());
  return kOk;
}

int cmd_mms(const io::RunConfig& rc) {
  print_params(rc);
  if (!rc.solver.exact_solution) fail(ErrorKind::invalid_input, "mms needs an exact_solution in the config");
  const MmsResult r = mms_study(rc.solver, rc.mms_n3);
  std::printf("%-8s %-14s %-8s\n", "n3", "error", "order");
  for (std::size_t k = 0; k < r.n3.size(); ++k) {
    if (k == 0) std::printf("%-8zu %-14.6e %-8s\n", r.n3[k], r.error[k], "-");
    else std::printf("%-8zu %-14.6e %-8.3f\n", r.n3[k], r.error[k], r.orders[k - 1]);
  }
  std::printf("fitted order = %.3f\n", r.fitted_order);
  return r.fitted_order >= 1.7 && r.fitted_order <= 2.3 ? kOk : kFailed;
}

int cmd_limit(const io::RunConfig& rc) {
  print_params(rc);
  const auto rows = limit_sweep(rc.solver, rc.limit_eps);
  std::printf("%-8s %-14s %-10s %-14s %s\n", "eps", "sup|eta-eta0|", "reduction", "max|B-delta|", "status");
  bool decreasing = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    std::printf("%-8.4f %-14.6e %-10.3f %-14.6e %s\n", r.eps, r.sup_difference, r.reduction, r.max_B_deviation,
                r.aborted ? r.message.c_str() : "ok");
    if (r.aborted || (k > 0 && !(r.sup_difference < rows[k - 1].sup_difference))) decreasing = false;
  }
  return decreasing ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian solver and diagnostics for relativistic gas with a physical vacuum boundary"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string config_path;
  std::optional<std::string> out_dir;
  std::vector<std::string> selectors;
  std::string checkpoint;
  int order = -1;
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "reserved; no command uses randomness from the command line");

  auto* sim = app.add_subcommand("simulate", "run the planar solver, write energy.csv and a final checkpoint");
  sim->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  sim->add_option("--output-dir", out_dir, "output directory (LAGVAC_OUTPUT_DIR overrides)");

  auto* ver = app.add_subcommand("verify", "run the invariant and property suite");
  ver->add_option("--config", config_path, "JSON configuration with a 'verify' selector list")->check(CLI::ExistingFile);
  ver->add_option("selectors", selectors, "check names or groups (default: all)");

  auto* en = app.add_subcommand("energy", "print the energy report of a checkpoint");
  en->add_option("--checkpoint", checkpoint, "checkpoint header (.json)")->required()->check(CLI::ExistingFile);
  en->add_option("--order", order, "diagnostic order N (default: grid dependent)")->check(CLI::NonNegativeNumber);

  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms->add_option("--config", config_path, "JSON configuration with exact_solution")->required()->check(CLI::ExistingFile);

  auto* lim = app.add_subcommand("limit", "non-relativistic limit sweep over eps");
  lim->add_option("--config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sim) return cmd_simulate(config_or_default(config_path), out_dir);
    if (*ver) return cmd_verify(config_or_default(config_path), selectors);
    if (*en) return cmd_energy(checkpoint, order);
    if (*mms) return cmd_mms(config_or_default(config_path));
    if (*lim) return cmd_limit(config_or_default(config_path));
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::invalid_input || e.kind() == ErrorKind::invalid_weight ||
                   e.kind() == ErrorKind::io
               ? kUsage
               : kFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
  return kUsage;
}
