#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hetex/collision_guard.hpp"
#include "hetex/config.hpp"
#include "hetex/mission_planner.hpp"
#include "hetex/occupancy_map.hpp"
#include "hetex/scenario.hpp"

namespace hetex {

struct TimelineSample {
  double t = 0.0;
  double fraction = 0.0;
};

// One scheduled module execution. `work` is a module-specific size (rays cast,
// frontier cells, POIs considered, events raised).
struct TickTiming {
  std::string module;
  std::uint64_t tick = 0;
  double t = 0.0;
  std::uint64_t work = 0;
  std::optional<double> duration_ms;  // only with record_wall_time
};

struct EventRow {
  double t = 0.0;
  std::string kind;
  std::string uav;  // empty when not UAV specific
  Vec3 where = Vec3::Zero();
  std::int64_t count = 0;
  double value = 0.0;
  std::string note;
};

// Guard tick sample used to audit the safety invariants.
struct GuardSample {
  double t = 0.0;
  SafetyZone zone = SafetyZone::Safe;
  double distance = 0.0;
  Vec3 primary_position = Vec3::Zero();
  bool primary_halted = false;
};

struct RegionReport {
  std::string name;
  bool gated = false;
  std::size_t cells = 0;           // cells whose centre lies in the region and are free in truth
  std::size_t known = 0;           // of those, no longer Unknown
  std::size_t secondary_only = 0;  // known cells observed only by the sUAV
  std::size_t primary_seen = 0;    // known cells the pUAV observed
};

struct MissionSummary {
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  bool complete = false;
  bool incomplete = false;  // t_max reached first
  bool collision_fault = false;
  std::string fault;
  double sim_time = 0.0;
  std::uint64_t steps = 0;
  double final_fraction = 0.0;
  std::optional<double> t_95;
  std::uint64_t total_pois = 0;  // summed over frontier ticks
  std::uint64_t allocations = 0;
  std::uint64_t dispatches = 0;
  std::uint64_t interventions = 0;
  double min_distance = 0.0;
  double safety_floor = 0.0;
  std::uint64_t halt_violations = 0;  // guard ticks with a halted pUAV that still moved
  std::array<std::uint64_t, 4> tick_counts{};  // sensor, frontier, planner, guard
  std::array<double, kUavCount> travelled{};
  std::vector<RegionReport> regions;

  bool safety_ok() const { return !collision_fault && halt_violations == 0 && min_distance >= safety_floor; }
};

struct MetricsRecord {
  std::vector<TimelineSample> timeline;
  std::vector<TickTiming> timings;
  std::vector<EventRow> events;
  std::vector<GuardSample> guard;
  MissionSummary summary;
};

// First time the timeline reaches `target`, linearly interpolated between the
// bracketing samples.
std::optional<double> time_to_fraction(const std::vector<TimelineSample>& timeline, double target);

// Fixed-step mission loop. Each step moves the UAVs by dt and then runs, in
// order, whichever of sensor, frontier, planner and guard ticks are due.
// Construction runs every module once at t = 0.
class Simulation {
 public:
  Simulation(const Scenario& scenario, const MissionConfig& config);

  void step();
  // Steps until completion, t_max, or a collision fault.
  void run();
  bool done() const;

  double time() const { return static_cast<double>(step_) * config_.dt; }
  std::uint64_t step_index() const { return step_; }
  const VoxelGrid& world() const { return world_; }
  const ExploredMap& map() const { return map_; }
  const UavPair& uavs() const { return uavs_; }
  UavPair& uavs() { return uavs_; }
  const DecisionSnapshot& snapshot() const { return *snapshot_; }
  const CollisionGuard& guard() const { return guard_; }
  const MissionConfig& config() const { return config_; }
  const MetricsRecord& record() const { return record_; }

  // Replaces a UAV's path with a scripted one (no exploration goal attached).
  void set_path(UavId id, const std::vector<Vec3>& waypoints);

  // Fills the summary (t_95, region attribution, safety audit) and returns the record.
  MetricsRecord finish();

 private:
  void move_uavs();
  void run_due_ticks();
  void sensor_tick();
  void frontier_tick();
  void planner_tick();
  void guard_tick();
  void check_free(const UavState& u) const;
  void event(std::string kind, std::optional<UavId> uav, const Vec3& where, std::int64_t count,
             double value, std::string note = {});

  Scenario scenario_;
  MissionConfig config_;
  VoxelGrid world_;
  ExploredMap map_;
  UavPair uavs_;
  PlannerState planner_;
  PlannerParams planner_params_;
  CollisionGuard guard_;
  std::shared_ptr<const DecisionSnapshot> snapshot_;
  std::uint64_t snapshot_version_ = 0;

  std::uint64_t step_ = 0;
  std::uint64_t p_sensor_, p_front_, p_path_, p_coll_;
  bool faulted_ = false;
  MetricsRecord record_;
};

// Builds the simulation, runs it and returns the finished record. A collision
// fault ends the run early and is reported in the summary.
MetricsRecord run_mission(const Scenario& scenario, const MissionConfig& config);

// timeline.csv  t,fraction
// timings.csv   module,tick,t,work,duration_ms (duration blank unless recorded)
// events.csv    t,kind,uav,x,y,z,count,value,note
// summary.json  MissionSummary fields
// Throws std::runtime_error when the directory cannot be written.
void write_outputs(const MetricsRecord& record, const std::string& out_dir);

// Scenario with the config's resolution and radius overrides applied.
Scenario apply_overrides(Scenario scenario, const MissionConfig& config);

}  // namespace hetex
