#include "hetex/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "hetex/frontier_finder.hpp"
#include "hetex/rng.hpp"

namespace hetex {

namespace {

using Clock = std::chrono::steady_clock;

double wrap(double a) { return wrap_angle(a); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_vec(const Vec3& v) { return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z()); }

// Scope timer that only reads the clock when wall timing is enabled.
class TickTimer {
 public:
  explicit TickTimer(bool on) : on_(on) {
    if (on_) start_ = Clock::now();
  }
  std::optional<double> elapsed_ms() const {
    if (!on_) return std::nullopt;
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  bool on_;
  Clock::time_point start_;
};

}  // namespace

std::optional<double> time_to_fraction(const std::vector<TimelineSample>& timeline, double target) {
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    if (timeline[i].fraction < target) continue;
    if (i == 0) return timeline[0].t;
    const TimelineSample& a = timeline[i - 1];
    const TimelineSample& b = timeline[i];
    const double w = (target - a.fraction) / (b.fraction - a.fraction);
    return a.t + w * (b.t - a.t);
  }
  return std::nullopt;
}

Scenario apply_overrides(Scenario s, const MissionConfig& c) {
  if (c.resolution) s.resolution = *c.resolution;
  if (c.s_p) s.uavs[index_of(UavId::Primary)].radius = *c.s_p;
  if (c.s_s) s.uavs[index_of(UavId::Secondary)].radius = *c.s_s;
  return s;
}

Simulation::Simulation(const Scenario& scenario, const MissionConfig& config)
    : scenario_(apply_overrides(scenario, config)), config_(config) {
  config_.validate();
  world_ = rasterize_world(scenario_.bounds, scenario_.resolution, scenario_.boxes);
  map_ = ExploredMap(world_, scenario_.explore_bounds);

  for (const UavSpec& spec : scenario_.uavs) {
    UavState& u = uavs_[index_of(spec.id)];
    u.id = spec.id;
    u.position = spec.start;
    u.heading = spec.heading;
    u.radius = spec.radius;
    u.speed = spec.speed;
    u.heading_rate = spec.heading_rate;
    u.sensor = spec.sensor;
    check_free(u);
  }

  planner_params_.strategy = config_.strategy;
  planner_params_.goal_tolerance = config_.goal_tolerance;
  planner_params_.keep_out = config_.d_s;
  planner_params_.primary_home = uavs_[index_of(UavId::Primary)].position;
  planner_params_.allocator = AllocatorParams{config_.alpha, config_.beta, config_.arc_budget,
                                              config_.self_cost, config_.safety_weight};
  guard_ = CollisionGuard(GuardParams{config_.d_c, config_.d_s, config_.relax_radius});

  p_sensor_ = config_.period_steps(config_.f_sensor);
  p_front_ = config_.period_steps(config_.f_front);
  p_path_ = config_.period_steps(config_.f_path);
  p_coll_ = config_.period_steps(config_.f_coll);

  double v_max = 0.0;
  for (const UavState& u : uavs_) v_max = std::max(v_max, u.speed);
  record_.summary.scenario = scenario_.name;
  record_.summary.strategy = to_string(config_.strategy);
  record_.summary.seed = config_.seed;
  record_.summary.safety_floor = config_.d_c - 2.0 * v_max / config_.f_coll;
  record_.summary.min_distance = (uavs_[0].position - uavs_[1].position).norm();

  run_due_ticks();
}

void Simulation::check_free(const UavState& u) const {
  const auto cell = world_.world_to_cell(u.position);
  if (!cell) throw CollisionFault(std::string(to_string(u.id)) + " left the world bounds");
  if (world_.state(world_.index(*cell)) != CellState::Free)
    throw CollisionFault(std::string(to_string(u.id)) + " entered an occupied cell at " +
                         fmt_vec(u.position));
}

void Simulation::event(std::string kind, std::optional<UavId> uav, const Vec3& where,
                       std::int64_t count, double value, std::string note) {
  record_.events.push_back(
      {time(), std::move(kind), uav ? to_string(*uav) : "", where, count, value, std::move(note)});
}

void Simulation::set_path(UavId id, const std::vector<Vec3>& waypoints) {
  UavState& u = uavs_[index_of(id)];
  u.active_path.assign(waypoints.begin(), waypoints.end());
  u.goal.reset();
  u.hold_heading.reset();
}

void Simulation::move_uavs() {
  const double dt = config_.dt;
  for (UavState& u : uavs_) {
    if (u.halted) continue;
    if (!u.has_path()) {
      // An idle sUAV sweeps its cone sensor by yawing in place.
      if (u.id == UavId::Secondary && !u.guard_controlled)
        u.heading = wrap(u.heading + u.heading_rate * dt);
      continue;
    }
    const Vec3 before = u.position;

    // Heading of travel, taken toward the current waypoint before moving.
    const Vec3 to_next = u.active_path.front() - u.position;
    std::optional<double> desired = u.hold_heading;
    if (!desired && std::hypot(to_next.x(), to_next.y()) > 1e-9)
      desired = std::atan2(to_next.y(), to_next.x());

    double budget = u.speed * dt;
    while (budget > 0.0 && u.has_path()) {
      const Vec3 d = u.active_path.front() - u.position;
      const double len = d.norm();
      if (len <= budget + 1e-9) {
        u.position = u.active_path.front();
        u.active_path.pop_front();
        budget -= len;
      } else {
        u.position += d * (budget / len);
        budget = 0.0;
      }
    }
    record_.summary.travelled[index_of(u.id)] += (u.position - before).norm();

    // The pUAV sensor is omnidirectional, so only the sUAV turns.
    if (u.id == UavId::Secondary && desired) {
      const double err = wrap(*desired - u.heading);
      const double max_turn = u.heading_rate * dt;
      u.heading = wrap(u.heading + std::clamp(err, -max_turn, max_turn));
    }
    check_free(u);
  }
  const double d = (uavs_[0].position - uavs_[1].position).norm();
  record_.summary.min_distance = std::min(record_.summary.min_distance, d);
}

void Simulation::step() {
  if (faulted_) return;
  try {
    move_uavs();
    ++step_;
    run_due_ticks();
  } catch (const CollisionFault& e) {
    faulted_ = true;
    record_.summary.collision_fault = true;
    record_.summary.fault = e.what();
  }
}

void Simulation::run_due_ticks() {
  if (step_ % p_sensor_ == 0) sensor_tick();
  if (step_ % p_front_ == 0) frontier_tick();
  if (step_ % p_path_ == 0) planner_tick();
  if (step_ % p_coll_ == 0) guard_tick();
}

void Simulation::sensor_tick() {
  TickTimer timer(config_.record_wall_time);
  std::uint64_t rays = 0;
  for (const UavState& u : uavs_) {
    const Scan scan = sample_scan(world_, u.sensor, u.position, u.heading);
    map_.integrate_scan(scan, u.id);
    rays += scan.hits.size();
  }
  record_.timeline.push_back({time(), map_.explored_fraction()});
  record_.timings.push_back(
      {"sensor", record_.summary.tick_counts[0]++, time(), rays, timer.elapsed_ms()});
}

void Simulation::frontier_tick() {
  TickTimer timer(config_.record_wall_time);
  auto snap = std::make_shared<DecisionSnapshot>();
  snap->version = ++snapshot_version_;
  snap->map_version = map_.version();
  snap->grid = map_.grid();

  const auto frontiers = detect_frontiers(map_);
  const double eps = config_.eps.value_or(3.0 * scenario_.resolution);
  const auto clusters = cluster_frontiers(frontiers, eps);
  const std::uint64_t poi_seed = CounterRng(config_.seed).split(snap->version).next();
  snap->pois = generate_pois(clusters, map_, config_.samples_per_cluster,
                             config_.min_cluster_for_sampling, poi_seed);
  snap->frontier_count = frontiers.size();
  snap->cluster_count = clusters.size();

  snap->field = DistanceField(snap->grid, true);
  SphereMapParams sp{config_.r_sph, config_.r_max, config_.sphere_stride, config_.goal_snap};
  snap->graph = build_sphere_graph(snap->grid, snap->field, snap->map_version, sp);

  record_.summary.total_pois += snap->pois.size();
  event("frontier", std::nullopt, Vec3::Zero(), static_cast<std::int64_t>(frontiers.size()),
        static_cast<double>(clusters.size()),
        "pois=" + std::to_string(snap->pois.size()) +
            " spheres=" + std::to_string(snap->graph.nodes().size()));
  record_.timings.push_back({"frontier", record_.summary.tick_counts[1]++, time(),
                             frontiers.size(), timer.elapsed_ms()});
  snapshot_ = std::move(snap);
}

void Simulation::planner_tick() {
  TickTimer timer(config_.record_wall_time);
  std::uint64_t work = 0;
  if (config_.autonomy) {
    tick_monitoring(planner_, uavs_, config_.goal_tolerance);
    const PlanningOutcome out = tick_planning(planner_, *snapshot_, uavs_, planner_params_);
    if (out.ran) {
      work = out.poi_count;
      ++record_.summary.allocations;
      const Assignment& a = out.assignment;
      auto goal_text = [](const std::optional<Poi>& g) {
        return g ? fmt_vec(g->position) : std::string("stay");
      };
      event("allocation", std::nullopt, Vec3::Zero(), static_cast<std::int64_t>(out.poi_count),
            static_cast<double>(a.total_cost),
            std::string("strategy=") + to_string(config_.strategy) +
                " arcs=" + std::to_string(a.arc_count) + " p=" + goal_text(a.goal_p) +
                " s=" + goal_text(a.goal_s));
      for (const Dispatch& d : out.dispatches) {
        ++record_.summary.dispatches;
        event("dispatch", d.uav, d.goal.position, d.waypoint_count, d.length_m);
      }
    }
  }
  record_.timings.push_back(
      {"planner", record_.summary.tick_counts[2]++, time(), work, timer.elapsed_ms()});
}

void Simulation::guard_tick() {
  TickTimer timer(config_.record_wall_time);
  const UavState& s = uavs_[index_of(UavId::Secondary)];
  const bool was_controlled = s.guard_controlled;
  const std::optional<Poi> goal_before = s.goal;
  const auto res = guard_.tick(uavs_, snapshot_->field);
  // A goal abandoned for an escape is retired like a reached one, so the sUAV
  // is not sent straight back toward the pUAV.
  if (!was_controlled && s.guard_controlled && goal_before)
    planner_.visited.push_back(goal_before->position);
  for (const SafetyEvent& e : res.events)
    event(to_string(e.kind), e.uav, e.where, static_cast<std::int64_t>(e.zone), e.distance, e.note);
  const UavState& p = uavs_[index_of(UavId::Primary)];
  record_.guard.push_back({time(), res.zone, res.distance, p.position, p.halted});
  record_.summary.interventions = guard_.interventions();
  record_.timings.push_back({"guard", record_.summary.tick_counts[3]++, time(), res.events.size(),
                             timer.elapsed_ms()});
}

bool Simulation::done() const {
  return faulted_ || map_.explored_fraction() >= config_.completion_target ||
         time() >= config_.t_max - 1e-9;
}

void Simulation::run() {
  while (!done()) step();
}

MetricsRecord Simulation::finish() {
  MissionSummary& s = record_.summary;
  s.sim_time = time();
  s.steps = step_;
  s.final_fraction = map_.explored_fraction();
  s.complete = !faulted_ && s.final_fraction >= config_.completion_target;
  s.incomplete = !faulted_ && !s.complete;
  s.t_95 = time_to_fraction(record_.timeline, 0.95);

  s.halt_violations = 0;
  for (std::size_t i = 0; i + 1 < record_.guard.size(); ++i) {
    const GuardSample& a = record_.guard[i];
    if (a.zone == SafetyZone::Safe) continue;
    if (a.primary_position != record_.guard[i + 1].primary_position) ++s.halt_violations;
  }

  s.regions.clear();
  const VoxelGrid& g = map_.grid();
  for (const Region& r : scenario_.regions) {
    RegionReport rep{r.name, r.gated};
    for (CellIndex idx = 0; idx < g.size(); ++idx) {
      if (!r.box.contains(g.cell_center(g.coords(idx)))) continue;
      if (world_.state(idx) != CellState::Free) continue;
      ++rep.cells;
      if (g.state(idx) == CellState::Unknown) continue;
      ++rep.known;
      const std::uint8_t who = map_.observed_by(idx);
      if (who == observer_bit(UavId::Secondary)) ++rep.secondary_only;
      if (who & observer_bit(UavId::Primary)) ++rep.primary_seen;
    }
    s.regions.push_back(rep);
  }
  return record_;
}

MetricsRecord run_mission(const Scenario& scenario, const MissionConfig& config) {
  Simulation sim(scenario, config);
  sim.run();
  return sim.finish();
}

void write_outputs(const MetricsRecord& rec, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());

  auto open = [&](const char* name) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error(std::string("cannot write ") + name + " in " + out_dir);
    return out;
  };

  {
    auto out = open("timeline.csv");
    out << "t,fraction\n";
    for (const auto& s : rec.timeline) out << fmt(s.t) << ',' << fmt(s.fraction) << '\n';
  }
  {
    auto out = open("timings.csv");
    out << "module,tick,t,work,duration_ms\n";
    for (const auto& s : rec.timings) {
      out << s.module << ',' << s.tick << ',' << fmt(s.t) << ',' << s.work << ',';
      if (s.duration_ms) out << fmt(*s.duration_ms);
      out << '\n';
    }
  }
  {
    auto out = open("events.csv");
    out << "t,kind,uav,x,y,z,count,value,note\n";
    for (const auto& e : rec.events) {
      out << fmt(e.t) << ',' << e.kind << ',' << e.uav << ',' << fmt(e.where.x()) << ','
          << fmt(e.where.y()) << ',' << fmt(e.where.z()) << ',' << e.count << ','
          << fmt(e.value) << ",\"" << e.note << "\"\n";
    }
  }
  {
    const MissionSummary& s = rec.summary;
    nlohmann::ordered_json j;
    j["scenario"] = s.scenario;
    j["strategy"] = s.strategy;
    j["seed"] = s.seed;
    j["complete"] = s.complete;
    j["incomplete"] = s.incomplete;
    j["collision_fault"] = s.collision_fault;
    j["fault"] = s.fault;
    j["sim_time"] = s.sim_time;
    j["steps"] = s.steps;
    j["final_fraction"] = s.final_fraction;
    j["t_95"] = s.t_95 ? nlohmann::ordered_json(*s.t_95) : nlohmann::ordered_json(nullptr);
    j["total_pois"] = s.total_pois;
    j["allocations"] = s.allocations;
    j["dispatches"] = s.dispatches;
    j["interventions"] = s.interventions;
    j["min_distance"] = s.min_distance;
    j["safety_floor"] = s.safety_floor;
    j["halt_violations"] = s.halt_violations;
    j["safety_ok"] = s.safety_ok();
    j["ticks"] = {{"sensor", s.tick_counts[0]},
                  {"frontier", s.tick_counts[1]},
                  {"planner", s.tick_counts[2]},
                  {"guard", s.tick_counts[3]}};
    j["travelled"] = {{"pUAV", s.travelled[0]}, {"sUAV", s.travelled[1]}};
    auto regions = nlohmann::ordered_json::array();
    for (const RegionReport& r : s.regions) {
      regions.push_back({{"name", r.name},
                         {"gated", r.gated},
                         {"cells", r.cells},
                         {"known", r.known},
                         {"secondary_only", r.secondary_only},
                         {"primary_seen", r.primary_seen}});
    }
    j["regions"] = regions;
    auto out = open("summary.json");
    out << j.dump(2) << '\n';
  }
}

}  // namespace hetex
