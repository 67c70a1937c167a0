#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "quadadapt/errors.hpp"
#include "quadadapt/simulation.hpp"

using namespace quadadapt;

namespace {

SimConfig hover_config() {
  SimConfig c;
  c.trajectory.center = Vector3(0, 0, -1);
  c.duration = 5.0;
  c.adaptation = false;
  return c;
}

std::string csv_of(const SimulationResult& r) {
  std::ostringstream os;
  write_csv(r.records, os);
  return os.str();
}

}  // namespace

TEST_CASE("runs are deterministic") {
  SimConfig c;
  c.plant = PlantMode::Synthetic;
  c.trajectory.kind = scenarios::TrajectoryKind::Circle;
  c.network.random_init = true;
  c.network.init_scale = 0.5;
  c.duration = 1.0;
  c.seed = 42;
  const auto a = run_simulation(c);
  const auto b = run_simulation(c);
  CHECK_FALSE(a.aborted);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(a.nn1.W == b.nn1.W);

  c.seed = 43;
  CHECK(csv_of(run_simulation(c)) != csv_of(a));
}

TEST_CASE("hover holds without adaptation") {
  const auto r = run_simulation(hover_config());
  REQUIRE_FALSE(r.aborted);
  CHECK(r.records.size() == 5000);
  for (const auto& rec : r.records) CHECK(rec.e_x.norm() <= 1e-3);
}

TEST_CASE("full plant without wind, flapping or drag matches the simplified plant at hover") {
  SimConfig simple = hover_config();
  simple.duration = 2.0;
  SimConfig full = simple;
  full.plant = PlantMode::Full;
  full.aero.flap_coeff = 0.0;
  full.aero.body_drag = 0.0;
  const auto a = run_simulation(simple);
  const auto b = run_simulation(full);
  REQUIRE_FALSE(a.aborted);
  REQUIRE_FALSE(b.aborted);
  REQUIRE(a.records.size() == b.records.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    worst = std::max(worst, std::abs(a.records[k].thrust - b.records[k].thrust));
    worst = std::max(worst, (a.records[k].rotor_thrusts - b.records[k].rotor_thrusts)
                                .cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("thrust stays aligned with the commanded direction") {
  SimConfig c;
  c.trajectory.kind = scenarios::TrajectoryKind::Circle;
  c.position_offset = Vector3(0.3, -0.2, 0.1);
  c.attitude_offset = Vector3(0.1, -0.1, 0.2);
  c.duration = 3.0;
  Simulation sim(c);
  for (int k = 0; k < 3000; ++k) {
    const auto rec = sim.step();
    const auto& d = sim.diagnostics();
    CHECK(rec.thrust > 0.0);
    CHECK(d.thrust_alignment > 0.0);
  }
}

TEST_CASE("non-finite state aborts with the quantity and step") {
  SimConfig c = hover_config();
  c.position_offset = Vector3(1e308, 0, 0);
  c.gains.k_x = 1e10;
  const auto r = run_simulation(c);
  REQUIRE(r.aborted);
  CHECK(r.abort_step == 0);
  CHECK(r.records.empty());
  CHECK(r.abort_reason.find("step 0") != std::string::npos);
  INFO(r.abort_reason);
  CHECK((r.abort_reason.find("non-finite") != std::string::npos ||
         r.abort_reason.find("thrust") != std::string::npos));
}

TEST_CASE("invalid configs are rejected up front") {
  SimConfig c;
  c.dt = 0.0;
  CHECK_THROWS_AS(Simulation{c}, ValidationError);
}

TEST_CASE("synthetic targets respect their output bound") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto net = random_target_network(6, 10, 3, 20, 20, 2.0, rng);
    CHECK(net.V.norm() == doctest::Approx(18.0));
    CHECK(net.W.norm() * std::sqrt(11.0) <= 2.0 + 1e-12);
  }
}

TEST_CASE("run summary") {
  SimConfig c = hover_config();
  c.duration = 0.1;
  const auto r = run_simulation(c);
  std::ostringstream os;
  write_run_summary(os, c, r);
  CHECK(os.str().find("run.aborted: false") != std::string::npos);
  CHECK(os.str().find("summary.e_x_rms:") != std::string::npos);
  CHECK(os.str().find("stability.all_pass:") != std::string::npos);
}
