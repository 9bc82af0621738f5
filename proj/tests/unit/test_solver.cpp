#include <doctest.h>

#include <cmath>

#include "lagvac/solver.hpp"

using namespace lagvac;

TEST_CASE("config validation") {
  SolverConfig c;
  c.n3 = 4;
  CHECK_THROWS_AS(c.validate(), Error);
  c.n3 = 16;
  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c.cfl = 0.4;
  c.t_end = -1.0;
  CHECK_THROWS_AS(run(c), Error);
}

TEST_CASE("t_end = 0 logs the initial state only") {
  SolverConfig c;
  c.n3 = 33;
  c.t_end = 0.0;
  const Trajectory t = run(c);
  REQUIRE(t.log.size() == 1);
  CHECK(t.log[0].t == 0.0);
  CHECK(t.log[0].E_I == 0.0);
  CHECK(t.steps == 0);
}

TEST_CASE("eps = 0 run conserves the discrete energy and stays irrotational") {
  SolverConfig c;
  c.n3 = 128;
  c.t_end = 0.3;
  c.output_interval = 0.1;
  c.energy_reports = false;
  const Trajectory t = run(c);
  CHECK(t.log.size() == 4);
  CHECK(t.log.back().t == doctest::Approx(0.3).epsilon(1e-14));
  for (const auto& r : t.log) {
    CHECK(r.energy_drift < 1e-8);
    CHECK(r.max_curl_chi == 0.0);
    CHECK(r.min_J > 0.9);
  }
  CHECK(t.events.empty());
}

TEST_CASE("serial and parallel runs agree bitwise") {
  SolverConfig c;
  c.n3 = 64;
  c.t_end = 0.1;
  c.params = ThermoParams::make(1.5, 0.3);
  c.eta1 = "0.2*sin(pi*x3)";
  c.energy_reports = false;
  c.exec = Exec::serial;
  const Trajectory a = run(c);
  c.exec = Exec::parallel;
  const Trajectory b = run(c);
  CHECK(a.states.back().eta == b.states.back().eta);
  CHECK(a.states.back().eta_t == b.states.back().eta_t);
}

TEST_CASE("MMS errors shrink at second order") {
  SolverConfig c;
  c.params = ThermoParams::make(2.0, 0.2);
  c.t_end = 0.5;
  c.exact_solution = "x3 + 0.01*sin(t)*x3*(1-x3)";
  const MmsResult r = mms_study(c, {32, 64, 128});
  CHECK(r.fitted_order > 1.7);
  CHECK(r.fitted_order < 2.3);
}

TEST_CASE("collapse aborts with the partial trajectory") {
  SolverConfig c;
  c.n3 = 64;
  c.t_end = 2.0;
  c.eta1 = "-3*sin(pi*x3)";
  c.energy_reports = false;
  try {
    (void)run(c);
    FAIL("expected an abort");
  } catch (const SimulationAborted& e) {
    CHECK(e.kind() == ErrorKind::simulation_aborted);
    CHECK(!e.partial().log.empty());
  }
}
