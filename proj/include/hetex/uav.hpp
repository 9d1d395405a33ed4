#pragma once

#include <deque>
#include <optional>

#include "hetex/frontier_finder.hpp"
#include "hetex/types.hpp"
#include "hetex/voxel_world.hpp"

namespace hetex {

struct UavState {
  UavId id = UavId::Primary;
  Vec3 position = Vec3::Zero();
  double heading = 0.0;       // rad
  double radius = 0.45;       // m
  double speed = 1.0;         // m/s
  double heading_rate = 1.0;  // rad/s
  SensorModel sensor;

  std::deque<Vec3> active_path;          // remaining waypoints
  std::optional<Poi> goal;               // exploration goal behind active_path
  std::optional<double> hold_heading;    // fixed heading while following the path
  bool halted = false;                   // set by the collision guard
  bool guard_controlled = false;         // sUAV executing an escape manoeuvre

  bool has_path() const { return !active_path.empty(); }
};

}  // namespace hetex
