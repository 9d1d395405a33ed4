#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetex/frontier_finder.hpp"
#include "hetex/sphere_map.hpp"
#include "hetex/types.hpp"

namespace hetex {

enum class Strategy : std::uint8_t { Greedy, Mcf };

const char* to_string(Strategy s);
Strategy parse_strategy(const std::string& name);  // "greedy" | "mcf"

struct AllocatorParams {
  double alpha = 1.0;
  double beta = 0.5;            // m per rad
  int arc_budget = 5;           // N: accessible POIs examined per UAV
  std::int64_t self_cost = 1'000'000;  // c_x, milliunits
  double safety_weight = 0.2;   // lambda passed to the sphere planner (m)
};

struct UavPose {
  Vec3 position = Vec3::Zero();
  double heading = 0.0;
  double radius = 0.45;
};

struct AllocationInput {
  std::span<const Poi> pois;
  UavPose primary;
  UavPose secondary;
  const SphereGraph* graph = nullptr;
};

// Goal per UAV; nullopt means Stay.
struct Assignment {
  std::optional<Poi> goal_p;
  std::optional<Poi> goal_s;
  std::int64_t total_cost = 0;  // milliunits
  std::size_t arc_count = 0;    // UAV->POI arcs examined (MCF only)
};

// Fixed-point conversion used for every cost handed to the flow solver.
std::int64_t to_milli(double cost);
// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

double greedy_cost_p(const Vec3& x_p, const Vec3& g);
double greedy_cost_s(const Vec3& x_s, double phi_s, const Vec3& g, double alpha, double beta);

// Assignment problem as a flow network. Node layout: source, sink, one node per
// UAV, one per POI, one stand-in "stay" node per UAV. All capacities are 1.
class FlowNetwork {
 public:
  struct Arc {
    int from = 0;
    int to = 0;
    int capacity = 1;
    std::int64_t cost = 0;
  };

  FlowNetwork(std::size_t uav_count, std::vector<Poi> pois);

  int source() const { return 0; }
  int sink() const { return 1; }
  int uav_node(std::size_t u) const { return 2 + static_cast<int>(u); }
  int poi_node(std::size_t p) const { return 2 + static_cast<int>(uav_count_ + p); }
  int self_node(std::size_t u) const {
    return 2 + static_cast<int>(uav_count_ + pois_.size() + u);
  }
  std::size_t node_count() const { return 2 + 2 * uav_count_ + pois_.size(); }
  std::size_t uav_count() const { return uav_count_; }
  const std::vector<Poi>& pois() const { return pois_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  int balance(int node) const;

  void add_poi_arc(std::size_t uav, std::size_t poi, std::int64_t cost);
  void add_self_arc(std::size_t uav, std::int64_t cost);
  // UAV->POI and UAV->self arcs leaving this UAV, in insertion order.
  std::vector<std::size_t> uav_arcs(std::size_t uav) const;

 private:
  std::size_t uav_count_;
  std::vector<Poi> pois_;
  std::vector<Arc> arcs_;
};

struct FlowSolution {
  std::vector<int> flow;  // per arc
  std::int64_t cost = 0;
  // Chosen POI index per UAV; nullopt when the flow uses the stay node.
  std::vector<std::optional<std::size_t>> goal;
};

// Successive shortest augmenting paths with node potentials. Throws
// std::logic_error when the supply cannot be routed.
FlowSolution solve_min_cost_flow(const FlowNetwork& net);

// Two-UAV network following the priority-queue construction: per UAV, POIs are
// popped in heuristic order, a sphere path is planned for each, and accessible
// ones get an arc costing heuristic + waypoint count, until arc_budget arcs exist.
FlowNetwork build_network(const AllocationInput& in, const AllocatorParams& params);
Assignment solve_mcf(const FlowNetwork& net);

Assignment greedy_assign(const AllocationInput& in, const AllocatorParams& params);
Assignment assign(Strategy strategy, const AllocationInput& in, const AllocatorParams& params);

}  // namespace hetex
