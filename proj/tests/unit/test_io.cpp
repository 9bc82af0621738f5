#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "lagvac/io.hpp"

using namespace lagvac;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / ("lagvac_unit_" + std::to_string(std::random_device{}()) + name);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const io::RunConfig rc = io::parse_run_config(R"({"gamma": 1.5, "eps": 0.2, "n3": 128,
    "weight": "parabolic:2", "mms_n3": [32, 64], "serial": true})");
  CHECK(rc.solver.params.gamma == 1.5);
  CHECK(rc.solver.params.alpha == doctest::Approx(2.0));
  CHECK(rc.solver.n3 == 128);
  CHECK(rc.solver.exec == Exec::serial);
  CHECK(rc.mms_n3 == std::vector<std::size_t>{32, 64});
  CHECK(rc.solver.weight({0, 0, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("config errors name the key and line") {
  try {
    (void)io::parse_run_config("{\n  \"gamma\": 2.0,\n  \"colour\": 3\n}", "bad.json");
    FAIL("accepted an unknown key");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("colour") != std::string::npos);
    CHECK(msg.find("bad.json:3") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_run_config(R"({"n3": "many"})"), Error);
  CHECK_THROWS_AS(io::parse_run_config("{ not json"), Error);
}

TEST_CASE("energy CSV round trip is bitwise") {
  const fs::path dir = scratch("csv");
  std::vector<MonitorRow> rows(3);
  for (int k = 0; k < 3; ++k) {
    rows[k].t = 0.1 * k;
    rows[k].E_I = 1.0 / 3.0 + k;
    rows[k].E_total = std::nextafter(1.0, 2.0) * k;
    rows[k].chi_h_res = 1e-300 * (k + 1);
    rows[k].max_eps_v = 0.123456789012345678;
  }
  io::write_energy_csv(dir / "e.csv", rows);
  std::ifstream in(dir / "e.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == io::kEnergyCsvHeader);
  const auto back = io::read_energy_csv(dir / "e.csv");
  REQUIRE(back.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(back[k].t == rows[k].t);
    CHECK(back[k].E_I == rows[k].E_I);
    CHECK(back[k].E_total == rows[k].E_total);
    CHECK(back[k].chi_h_res == rows[k].chi_h_res);
    CHECK(back[k].max_eps_v == rows[k].max_eps_v);
  }
  CHECK_THROWS_AS(io::write_energy_csv(dir / "empty.csv", {}), Error);
  fs::remove_all(dir);
}

TEST_CASE("checkpoint round trip and size validation") {
  const fs::path dir = scratch("cp");
  const GridSpec g = GridSpec::slab(3, 2, 5);
  io::Checkpoint cp{FlowState::identity(g), ThermoParams::make(1.5, 0.25), "sin(pi*x3)"};
  cp.state.time = 0.3;
  cp.state.eta_tt = VectorField(g, 0.1);
  cp.state.eta_t(1, 7) = -2.5e-17;
  io::write_checkpoint(dir / "s", cp);
  const io::Checkpoint back = io::read_checkpoint(dir / "s.json");
  CHECK(back.state.eta == cp.state.eta);
  CHECK(back.state.eta_t == cp.state.eta_t);
  CHECK(*back.state.eta_tt == *cp.state.eta_tt);
  CHECK(back.state.time == 0.3);
  CHECK(back.params.eps == 0.25);
  CHECK(back.weight_spec == "sin(pi*x3)");
  fs::resize_file(dir / "s.eta.f64", 8);
  CHECK_THROWS_AS(io::read_checkpoint(dir / "s.json"), Error);
  fs::remove_all(dir);
}

TEST_CASE("output directory override") {
  ::setenv("LAGVAC_OUTPUT_DIR", "/tmp/elsewhere", 1);
  CHECK(io::output_directory("out") == fs::path("/tmp/elsewhere"));
  ::unsetenv("LAGVAC_OUTPUT_DIR");
  CHECK(io::output_directory("out") == fs::path("out"));
}
