#include <doctest.h>

#include <string>

#include "hetex/config.hpp"
#include "hetex/scenario.hpp"

using namespace hetex;

namespace {

const std::string kDir = std::string(HETEX_SOURCE_DIR) + "/scenarios/";

const char* kMinimal = R"({
  "bounds": {"min": [0, 0, 0], "max": [4, 4, 2]},
  "resolution": 0.2,
  "boxes": [{"min": [1, 1, 0], "max": [2, 2, 2]}],
  "explore_bounds": {"min": [0, 0, 0], "max": [4, 4, 2]},
  "uavs": [
    {"id": "sUAV", "start": [3, 3, 1], "heading": 1.5, "radius": 0.25,
     "sensor": {"kind": "cone", "h_fov_deg": 87, "v_fov_deg": 58, "max_range": 5,
                "n_azimuth": 8, "n_elevation": 4}},
    {"id": "pUAV", "start": [0.5, 0.5, 1], "radius": 0.45,
     "sensor": {"kind": "omni", "h_fov_deg": 360, "v_fov_deg": 90, "max_range": 10,
                "n_azimuth": 16, "n_elevation": 8}}
  ]
})";

std::string field_of(const std::string& doc) {
  try {
    parse_scenario(doc);
  } catch (const SchemaError& e) {
    return e.field();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("minimal scenario parses, UAVs indexed by id") {
  const Scenario sc = parse_scenario(kMinimal);
  CHECK(sc.resolution == 0.2);
  CHECK(sc.boxes.size() == 1);
  CHECK(sc.uavs[0].id == UavId::Primary);
  CHECK(sc.uavs[0].start == Vec3(0.5, 0.5, 1));
  CHECK(sc.uavs[0].speed == 1.0);
  CHECK(sc.uavs[1].id == UavId::Secondary);
  CHECK(sc.uavs[1].heading == 1.5);
  CHECK(sc.uavs[1].sensor.n_azimuth == 8);
  CHECK(sc.regions.empty());
}

TEST_CASE("schema errors name the offending field") {
  const std::string doc = kMinimal;
  CHECK(field_of("{") == "$");
  CHECK(field_of(replace(doc, "\"resolution\": 0.2", "\"resolution\": -1")) == "resolution");
  CHECK(field_of(replace(doc, "\"resolution\": 0.2", "\"resolution\": 0.3")) == "bounds");
  CHECK(field_of(replace(doc, "\"id\": \"sUAV\"", "\"id\": \"pUAV\"")) == "uavs[1].id");
  CHECK(field_of(replace(doc, "\"id\": \"sUAV\"", "\"id\": \"xUAV\"")) == "uavs[0].id");
  CHECK(field_of(replace(doc, "\"kind\": \"cone\"", "\"kind\": \"lidar\"")) == "uavs[0].sensor.kind");
  CHECK(field_of(replace(doc, "[3, 3, 1]", "[9, 3, 1]")) == "uavs[0].start");
  CHECK(field_of(replace(doc, "\"radius\": 0.25", "\"radius\": 0")) == "uavs[0].radius");
  CHECK(field_of(replace(doc, "\"max\": [2, 2, 2]", "\"max\": [0, 2, 2]")) == "boxes[0]");
  CHECK(field_of(replace(doc, "[1, 1, 0]", "[1, 1]")) == "boxes[0].min");
  CHECK(field_of(replace(doc, "\"boxes\"", "\"boxen\"")) == "$.boxes");
}

TEST_CASE("office scenario and its shipped parameter sets") {
  const Scenario sc = load_scenario_file(kDir + "office_s.json");
  CHECK(sc.bounds.max == Vec3(20, 20, 3));
  CHECK(sc.resolution == 0.2);
  int gated = 0;
  for (const Region& r : sc.regions) gated += r.gated;
  CHECK(gated >= 2);

  const MissionConfig office = load_config_file(kDir + "office_s.cfg");
  CHECK(office.s_p == 0.45);
  CHECK(office.s_s == 0.25);
  CHECK(office.d_s == 2.5);
  CHECK(office.d_c == 2.0);
  CHECK(office.r_sph == 0.35);
  CHECK(office.f_front == 0.5);
  CHECK(office.f_path == 2.0);
  CHECK(office.f_coll == 10.0);
  CHECK(office.arc_budget == 5);
  CHECK_NOTHROW(office.validate());

  const MissionConfig wh = load_config_file(kDir + "warehouse.cfg", office);
  CHECK(wh.s_p == 1.8);
  CHECK(wh.s_s == 0.4);
  CHECK(wh.d_s == 4.0);
  CHECK(wh.d_c == 3.5);
  CHECK(wh.r_sph == 0.9);
  CHECK(wh.f_coll == 10.0);
  CHECK_NOTHROW(wh.validate());
}

TEST_CASE("config parsing") {
  const MissionConfig c = parse_config(
      "# comment\n"
      "  allocator = greedy   # trailing\n"
      "alpha=2.5\n"
      "\n"
      "seed = 42\n"
      "autonomy = false\n"
      "eps = 0.4\n");
  CHECK(c.strategy == Strategy::Greedy);
  CHECK(c.alpha == 2.5);
  CHECK(c.seed == 42);
  CHECK_FALSE(c.autonomy);
  CHECK(c.eps == 0.4);
  CHECK(c.beta == MissionConfig{}.beta);

  CHECK_THROWS_AS(parse_config("nonsense = 1"), SchemaError);
  CHECK_THROWS_AS(parse_config("alpha"), SchemaError);
  CHECK_THROWS_AS(parse_config("alpha = fast"), SchemaError);
  CHECK_THROWS_AS(parse_config("n_arcs = 2.5"), SchemaError);
  CHECK_THROWS_AS(parse_config("allocator = auction"), SchemaError);
  CHECK_THROWS_AS(parse_config("autonomy = maybe"), SchemaError);
  CHECK_THROWS_AS(load_config_file(kDir + "missing.cfg"), std::runtime_error);
}

TEST_CASE("config validation and tick periods") {
  MissionConfig c;
  CHECK(c.period_steps(10.0) == 2);
  CHECK(c.period_steps(0.5) == 40);
  CHECK_THROWS_AS(c.period_steps(3.0), std::invalid_argument);
  CHECK_THROWS_AS(c.period_steps(0.0), std::invalid_argument);
  c.d_c = 3.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = MissionConfig{};
  c.f_path = 7.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = MissionConfig{};
  c.completion_target = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
