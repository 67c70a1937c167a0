#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "quadadapt/config.hpp"
#include "quadadapt/errors.hpp"

using namespace quadadapt;

namespace {

SimConfig from_text(const std::string& text) {
  std::istringstream in(text);
  return config_from_ini(parse_ini(in));
}

}  // namespace

TEST_CASE("minimal hover config") {
  const SimConfig c = from_text(
      "# hover\n"
      "[trajectory]\n"
      "kind = hover\n"
      "center = 0, 0, -1   ; one metre up\n"
      "[sim]\n"
      "duration = 2\n"
      "dt = 0.002\n"
      "[adaptation]\n"
      "enabled = off\n");
  CHECK(c.trajectory.kind == scenarios::TrajectoryKind::Hover);
  CHECK(c.trajectory.center == Vector3(0, 0, -1));
  CHECK(c.duration == 2.0);
  CHECK(c.dt == 0.002);
  CHECK_FALSE(c.adaptation);
  CHECK(c.plant == PlantMode::Simplified);
}

TEST_CASE("inertia accepts a diagonal or a full matrix") {
  CHECK(from_text("[quad]\ninertia = 0.1 0.2 0.3\n").quad.inertia ==
        Matrix3(Vector3(0.1, 0.2, 0.3).asDiagonal()));
  CHECK(from_text("[quad]\ninertia = 1 0 0 0 2 0 0 0 3\n").quad.inertia(2, 2) == 3.0);
}

TEST_CASE("invalid step size") {
  try {
    from_text("[sim]\ndt = 0.2\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("dt") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line and key") {
  try {
    from_text("[sim]\n\nfoo = 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.key() == "foo");
    CHECK(e.line() == 3);
  }
  try {
    from_text("[gains]\nk_x = 4\nk_x = 5\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.key() == "k_x");
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(from_text("[gains]\nk_x = four\n"), ParseError);
  CHECK_THROWS_AS(from_text("[gains\nk_x = 4\n"), ParseError);
  CHECK_THROWS_AS(from_text("k_x = 4\n"), ParseError);
  CHECK_THROWS_AS(from_text("[trajectory]\nkind = figure8\n"), ParseError);
  CHECK_THROWS_AS(from_text("[trajectory]\ncenter = 1 2\n"), ParseError);
  CHECK_THROWS_AS(from_text("[nope]\nx = 1\n"), ParseError);
  CHECK_THROWS_AS(load_config("/nonexistent/quadsim.ini"), IOError);
}

TEST_CASE("overrides") {
  SimConfig c;
  apply_override(c, "gains.k_x=7.5");
  apply_override(c, "wind.base = 1,2,3");
  apply_override(c, "plant.mode=full");
  CHECK(c.gains.k_x == 7.5);
  CHECK(c.wind.base == Vector3(1, 2, 3));
  CHECK(c.plant == PlantMode::Full);
  CHECK_THROWS_AS(apply_override(c, "k_x=1"), ParseError);
  CHECK_THROWS_AS(apply_override(c, "gains.k_y=1"), ParseError);
}

TEST_CASE("every key is accepted by an override") {
  const auto keys = config_keys();
  CHECK(std::find(keys.begin(), keys.end(), "sim.dt") != keys.end());
  CHECK(std::find(keys.begin(), keys.end(), "adaptation.kappa2") != keys.end());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    CHECK(std::count(keys.begin(), keys.end(), keys[i]) == 1);
  }
  CHECK(parse_plant_mode(to_string(PlantMode::Synthetic)) == PlantMode::Synthetic);
  CHECK_THROWS_AS(parse_plant_mode("exact"), ValidationError);
}
