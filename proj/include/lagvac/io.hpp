#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lagvac/solver.hpp"

namespace lagvac::io {

/// Everything a command needs, read from one JSON document.
struct RunConfig {
  SolverConfig solver;
  std::string weight_spec = "parabolic";
  std::filesystem::path output_dir = "lagvac_out";
  std::vector<std::size_t> mms_n3{64, 128, 256, 512};
  std::vector<double> limit_eps{0.4, 0.2, 0.1, 0.05};
  std::vector<std::string> verify;  // empty: every check
};

/// Parses a config. Unknown keys and type errors raise Error(invalid_input)
/// with the line of the offending key.
RunConfig parse_run_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// Weight from its config spelling: "parabolic", "parabolic:<scale>" or an expression.
WeightProfile weight_from_spec(std::string_view spec);

/// `fallback` unless LAGVAC_OUTPUT_DIR is set.
std::filesystem::path output_directory(const std::filesystem::path& fallback);

struct Checkpoint {
  FlowState state;
  ThermoParams params;
  std::string weight_spec = "parabolic";
};

/// Writes <stem>.json plus one <stem>.<field>.f64 blob per field.
void write_checkpoint(const std::filesystem::path& stem, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::filesystem::path& header);

inline constexpr const char* kEnergyCsvHeader =
    "t,E_I,E_II,E_III,E_IV,E_total,g0_defect,energy_drift,chi_h_res,min_J,max_eps_v";

void write_energy_csv(const std::filesystem::path& path, const std::vector<MonitorRow>& rows);
std::vector<MonitorRow> read_energy_csv(const std::filesystem::path& path);

/// Shortest round-trip text for a binary64 (17 significant digits).
std::string format_double(double x);

}  // namespace lagvac::io
