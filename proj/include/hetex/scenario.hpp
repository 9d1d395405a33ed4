#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "hetex/types.hpp"
#include "hetex/voxel_world.hpp"

namespace hetex {

struct UavSpec {
  UavId id = UavId::Primary;
  Vec3 start = Vec3::Zero();
  double heading = 0.0;       // rad
  double radius = 0.45;       // m
  double speed = 1.0;         // m/s
  double heading_rate = 1.0;  // rad/s
  SensorModel sensor;
};

// Named box used only for reporting (e.g. rooms behind narrow doors).
struct Region {
  std::string name;
  Aabb box;
  bool gated = false;
};

struct Scenario {
  std::string name;
  Aabb bounds;
  double resolution = 0.2;
  std::vector<Aabb> boxes;
  Aabb explore_bounds;
  std::vector<Region> regions;
  std::array<UavSpec, kUavCount> uavs;  // indexed by UavId
};

// Throws SchemaError naming the first offending field.
Scenario parse_scenario(std::string_view doc);
Scenario load_scenario_file(const std::string& path);

}  // namespace hetex
