#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "hetex/allocator.hpp"
#include "hetex/distance_field.hpp"
#include "hetex/sphere_map.hpp"
#include "hetex/uav.hpp"

namespace hetex {

// Everything the decision layer sees from one frontier tick.
struct DecisionSnapshot {
  std::uint64_t version = 0;      // increments per frontier tick
  std::uint64_t map_version = 0;  // ExploredMap::version() it was built from
  VoxelGrid grid;                 // explored map cells at build time
  DistanceField field;            // Unknown counted as obstacle
  SphereGraph graph;
  std::size_t frontier_count = 0;
  std::size_t cluster_count = 0;
  std::vector<Poi> pois;
};

enum class PlannerMode : std::uint8_t { Monitoring, Planning };

struct PlannerState {
  PlannerMode mode = PlannerMode::Planning;
  std::set<UavId> waiting{UavId::Primary, UavId::Secondary};
  std::vector<Vec3> visited;
  std::optional<std::uint64_t> last_map_version;
};

struct PlannerParams {
  Strategy strategy = Strategy::Mcf;
  AllocatorParams allocator;
  double goal_tolerance = 0.3;  // m
  bool smoothing = true;
  // sUAV paths avoid sphere nodes within this distance of the pUAV when such
  // a path exists; 0 disables the detour.
  double keep_out = 0.0;
  // Where a pUAV left without a goal parks; unset keeps it in place.
  std::optional<Vec3> primary_home;
};

struct Dispatch {
  UavId uav = UavId::Primary;
  Poi goal;
  int waypoint_count = 0;
  double length_m = 0.0;
};

struct PlanningOutcome {
  bool ran = false;  // false while blocked on a map update
  std::size_t poi_count = 0;
  Assignment assignment;
  std::vector<Dispatch> dispatches;
};

using UavPair = std::array<UavState, kUavCount>;

// UAVs that reached their goal (or ran out of path) join `waiting` and their
// goal is recorded as visited; a non-empty waiting set switches to Planning.
void tick_monitoring(PlannerState& state, UavPair& uavs, double goal_tolerance);

// Allocates goals from the latest snapshot and dispatches smoothed sphere paths
// to the waiting UAVs. Does nothing until the snapshot is newer than the one
// used last time.
PlanningOutcome tick_planning(PlannerState& state, const DecisionSnapshot& snapshot,
                              UavPair& uavs, const PlannerParams& params);

struct GridPath {
  std::vector<Vec3> waypoints;  // cell centres, start cell first
  double cost = 0.0;            // m, sum of step lengths
  Vec3 accepted_goal = Vec3::Zero();
};

// A* over the grid with cells closer than uav_radius to an obstacle (Occupied
// or Unknown, per `field`) removed; 26-connectivity, Euclidean heuristic.
// The start cell is always traversable. When the goal cell is blocked or
// unreachable, the nearest reachable free cell within `relax_radius` of the
// goal is used instead.
std::optional<GridPath> grid_astar(const DistanceField& field, const Vec3& start,
                                   const Vec3& goal, double uav_radius, double relax_radius);

// Greedy shortcutting: from each kept point, jump to the farthest later
// waypoint whose straight segment keeps clearance >= uav_radius.
std::vector<Vec3> shortcut_path(const DistanceField& field, const Vec3& start,
                                const std::vector<Vec3>& waypoints, double uav_radius);
bool segment_clear(const DistanceField& field, const Vec3& a, const Vec3& b, double uav_radius);

}  // namespace hetex
