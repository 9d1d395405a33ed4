#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hetex/distance_field.hpp"
#include "hetex/frontier_finder.hpp"
#include "hetex/occupancy_map.hpp"
#include "hetex/types.hpp"

namespace hetex {

struct SphereMapParams {
  double r_sph = 0.35;     // minimum sphere radius (m)
  double r_max = 2.0;      // radius cap (m)
  int stride = 2;          // lattice spacing of candidate centres, in cells
  double goal_snap = 0.6;  // attach distance for points outside every ball (m)
};

struct SphereNode {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  CellIndex cell = 0;
};

struct SphereEdge {
  int to = -1;
  double length = 0.0;
  // Smallest obstacle distance over both centres and the lattice cells the
  // edge crosses; an edge is usable by a UAV of radius s iff clearance >= s.
  double clearance = 0.0;
};

// Free-space balls on a cell lattice. Edges join lattice-adjacent nodes whose
// balls intersect; radius is the obstacle distance (Unknown counts as
// obstacle) capped at r_max.
class SphereGraph {
 public:
  SphereGraph() = default;

  const std::vector<SphereNode>& nodes() const { return nodes_; }
  const std::vector<SphereEdge>& neighbors(int node) const { return adjacency_[node]; }
  std::size_t edge_count() const;
  std::uint64_t built_from_version() const { return version_; }
  const SphereMapParams& params() const { return params_; }
  bool empty() const { return nodes_.empty(); }

  // Nearest node with radius >= uav_radius whose ball contains p, else the
  // nearest such node within goal_snap; ties go to the lower id. -1 if none.
  int attach(const Vec3& p, double uav_radius) const;

  friend SphereGraph build_sphere_graph(const VoxelGrid&, const DistanceField&, std::uint64_t,
                                        const SphereMapParams&);

 private:
  int node_at_lattice(int li, int lj, int lk) const;

  SphereMapParams params_;
  std::vector<SphereNode> nodes_;
  std::vector<std::vector<SphereEdge>> adjacency_;
  std::uint64_t version_ = 0;
  VoxelGrid geometry_;
  Index3 lattice_dims_{0, 0, 0};
  std::vector<int> lattice_;
};

SphereGraph build_sphere_graph(const VoxelGrid& snapshot, const DistanceField& field,
                               std::uint64_t version, const SphereMapParams& params);

// Rebuilds the graph from the current map when its version moved on.
SphereGraph update(const SphereGraph& graph, const ExploredMap& map, const SphereMapParams& params);

struct SpherePath {
  std::vector<Vec3> waypoints;
  std::vector<int> nodes;   // node ids visited, start node first
  double min_clearance = 0.0;
  double length_m = 0.0;    // polyline length from the start point
  double cost = 0.0;        // graph cost of the node sequence
  int waypoint_count = 0;
};

// Shortest-path tree from one start point for one UAV radius; answers many
// goal queries with a single Dijkstra run.
class SpherePlanner {
 public:
  // Nodes other than the start node whose centres lie within keep_out_radius
  // of keep_out_center are not entered (used to route around the other UAV).
  SpherePlanner(const SphereGraph& graph, const Vec3& start, double uav_radius,
                double safety_weight, const Vec3& keep_out_center = Vec3::Zero(),
                double keep_out_radius = 0.0);

  bool has_start() const { return start_node_ >= 0; }
  std::optional<SpherePath> path_to(const Vec3& goal) const;

 private:
  const SphereGraph* graph_;
  Vec3 start_;
  double uav_radius_;
  int start_node_ = -1;
  std::vector<double> dist_;
  std::vector<int> parent_;
};

std::optional<SpherePath> plan(const SphereGraph& graph, const Vec3& start, const Vec3& goal,
                               double uav_radius, double safety_weight,
                               const Vec3& keep_out_center = Vec3::Zero(),
                               double keep_out_radius = 0.0);

bool is_accessible(const SphereGraph& graph, const Vec3& from, const Poi& poi, double uav_radius);

}  // namespace hetex
