#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "quadadapt/errors.hpp"
#include "quadadapt/telemetry.hpp"

using namespace quadadapt;

namespace {

std::size_t count_cells(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

std::vector<TelemetryRecord> series(std::size_t n, double dt) {
  std::vector<TelemetryRecord> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k].t = k * dt;
  return out;
}

}  // namespace

TEST_CASE("empty telemetry is just the header") {
  std::ostringstream os;
  write_csv({}, os);
  std::string header;
  for (std::size_t i = 0; i < csv_columns().size(); ++i) {
    header += (i ? "," : "") + csv_columns()[i];
  }
  CHECK(os.str() == header + "\n");
  CHECK(csv_columns().front() == "t");
  CHECK(csv_columns().size() == 74);
}

TEST_CASE("CSV round trip is exact") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  std::vector<TelemetryRecord> recs(20);
  for (auto& r : recs) {
    r.t = n01(rng);
    r.x = Vector3(n01(rng), n01(rng), 1e-300);
    r.R = Matrix3::Random();
    r.psi = n01(rng) * 1e12;
    r.rotor_speeds = Eigen::Vector4d::Random();
    r.saturated = {true, false, n01(rng) > 0, false};
    r.V = std::nextafter(1.0, 2.0);
    r.wind = Vector3(-0.0, 3, 4);
  }
  std::stringstream ss;
  write_csv(recs, ss);
  std::string first_line;
  {
    std::istringstream again(ss.str());
    std::getline(again, first_line);
    std::getline(again, first_line);
  }
  CHECK(count_cells(first_line) == csv_columns().size());
  const auto back = read_csv(ss);
  REQUIRE(back.size() == recs.size());
  for (std::size_t k = 0; k < recs.size(); ++k) {
    CHECK(back[k].t == recs[k].t);
    CHECK(back[k].x == recs[k].x);
    CHECK(back[k].R == recs[k].R);
    CHECK(back[k].psi == recs[k].psi);
    CHECK(back[k].rotor_speeds == recs[k].rotor_speeds);
    CHECK(back[k].saturated == recs[k].saturated);
    CHECK(back[k].V == recs[k].V);
    CHECK(back[k].wind == recs[k].wind);
  }
}

TEST_CASE("decimation keeps every n-th row") {
  std::ostringstream os;
  write_csv(series(10, 0.1), os, 3);
  std::istringstream is(os.str());
  const auto back = read_csv(is);
  REQUIRE(back.size() == 4);
  CHECK(back[3].t == doctest::Approx(0.9));
}

TEST_CASE("malformed CSV") {
  std::istringstream bad_header("t,x_1\n");
  CHECK_THROWS_AS(read_csv(bad_header), ParseError);
  std::ostringstream os;
  write_csv({}, os);
  std::istringstream short_row(os.str() + "1,2,3\n");
  CHECK_THROWS_AS(read_csv(short_row), ParseError);
}

TEST_CASE("summary of a constant error") {
  auto recs = series(100, 0.01);
  for (auto& r : recs) r.e_x = Vector3(0, 1, 0);
  const Summary s = summarize(recs);
  CHECK(s.e_x_rms == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.e_x_max == 1.0);
  CHECK(s.e_x_rms_tail == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isnan(s.settling_time));
  CHECK(s.duration == doctest::Approx(0.99));
}

TEST_CASE("summary of a zero series") {
  const Summary s = summarize(series(50, 0.01));
  CHECK(s.e_x_rms == 0.0);
  CHECK(s.e_R_max == 0.0);
  CHECK(s.settling_time == 0.0);
  CHECK(s.saturated_steps == 0);
}

TEST_CASE("settling time of an exponential decay") {
  const double dt = 1e-3;
  auto recs = series(5000, dt);
  for (auto& r : recs) r.e_x = Vector3(std::exp(-2.0 * r.t), 0, 0);
  const Summary s = summarize(recs, 0.05);
  CHECK(std::abs(s.settling_time - std::log(20.0) / 2.0) <= dt);
}

TEST_CASE("saturation counts") {
  auto recs = series(4, 0.1);
  recs[1].saturated = {true, false, false, true};
  recs[2].saturated = {false, false, false, true};
  const Summary s = summarize(recs);
  CHECK(s.saturated_steps == 2);
  CHECK(s.saturation_counts[3] == 2);
  CHECK(s.saturation_counts[0] == 1);
  std::ostringstream os;
  write_summary(os, s);
  CHECK(os.str().find("summary.saturation_count_4: 2") != std::string::npos);
}

TEST_CASE("weights dump") {
  const auto a = nn::NNWeights::zeros(6, 2, 3, 1, 1);
  auto b = a;
  b.W(1, 2) = 0.5;
  std::ostringstream os;
  write_weights(a, b, os);
  const std::string s = os.str();
  CHECK(s.rfind("net,matrix,row,col,value\n", 0) == 0);
  CHECK(s.find("2,W,1,2,0.5\n") != std::string::npos);
  const long lines = std::count(s.begin(), s.end(), '\n');
  CHECK(lines == 1 + 2 * (3 * 3 + 7 * 2));
}
