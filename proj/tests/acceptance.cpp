// Acceptance checks: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hetex/allocator.hpp"
#include "hetex/collision_guard.hpp"
#include "hetex/config.hpp"
#include "hetex/frontier_finder.hpp"
#include "hetex/scenario.hpp"
#include "hetex/simulation.hpp"
#include "hetex/sphere_map.hpp"
#include "oracles.hpp"

using namespace hetex;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kDir = std::string(HETEX_SOURCE_DIR) + "/scenarios/";

std::map<int, std::string> results;
int failures = 0;

// Lines are collected and printed in criterion order at the end.
void report(int id, const char* title, bool ok, const std::string& detail) {
  char line[1024];
  std::snprintf(line, sizeof line, "[%s] criterion %d: %s -- %s", ok ? "PASS" : "FAIL", id, title,
                detail.c_str());
  results[id] = line;
  std::printf("  %s\n", line);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

MissionConfig office_config() { return load_config_file(kDir + "office_s.cfg"); }
Scenario office_scenario() { return load_scenario_file(kDir + "office_s.json"); }

// Every mission run here feeds the safety audit.
std::vector<MetricsRecord> audited;

// ---------------------------------------------------------------- 1
void mcf_optimality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240501);
  int mismatches = 0, distinct_violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = rng() % 9;
    std::vector<Poi> pois;
    for (std::size_t i = 0; i < n; ++i)
      pois.push_back(Poi{Vec3(double(i), 0, 0), PoiSource::Centroid, 0, 0});
    FlowNetwork net(2, pois);
    std::vector<std::vector<std::pair<int, std::int64_t>>> options(2);
    for (std::size_t u = 0; u < 2; ++u) {
      for (std::size_t p = 0; p < n; ++p) {
        if (rng() % 2) continue;  // accessibility mask
        const std::int64_t c = static_cast<std::int64_t>(rng() % 100000);
        net.add_poi_arc(u, p, c);
        options[u].push_back({static_cast<int>(p), c});
      }
      const std::int64_t cx = 1'000'000;
      net.add_self_arc(u, cx);
      options[u].push_back({-1, cx});
    }
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& [gp, cp] : options[0])
      for (const auto& [gs, cs] : options[1])
        if (gp < 0 || gp != gs) best = std::min(best, cp + cs);
    const FlowSolution sol = solve_min_cost_flow(net);
    if (sol.cost != best) ++mismatches;
    if (sol.goal[0] && sol.goal[1] && *sol.goal[0] == *sol.goal[1]) ++distinct_violations;
  }
  const double secs = seconds_since(t0);
  report(1, "min-cost flow equals enumeration on 500 instances",
         mismatches == 0 && distinct_violations == 0 && secs < 10.0,
         fmt("mismatches=%d shared_goal=%d time=%.3fs", mismatches, distinct_violations, secs));
}

// ---------------------------------------------------------------- 2 + 3
struct PairedRuns {
  std::vector<MetricsRecord> greedy, mcf;
};

PairedRuns paired_office_runs(int seeds, double& secs) {
  const auto t0 = Clock::now();
  const Scenario sc = office_scenario();
  PairedRuns out;
  for (int seed = 1; seed <= seeds; ++seed)
    for (Strategy s : {Strategy::Greedy, Strategy::Mcf}) {
      MissionConfig cfg = office_config();
      cfg.strategy = s;
      cfg.seed = static_cast<std::uint64_t>(seed);
      MetricsRecord rec = run_mission(sc, cfg);
      std::printf("  office_s %-6s seed %d: complete=%d t_95=%s fraction=%.4f\n", to_string(s), seed,
                  rec.summary.complete,
                  rec.summary.t_95 ? fmt("%.2f", *rec.summary.t_95).c_str() : "none",
                  rec.summary.final_fraction);
      std::fflush(stdout);
      (s == Strategy::Greedy ? out.greedy : out.mcf).push_back(rec);
      audited.push_back(std::move(rec));
    }
  secs = seconds_since(t0);
  return out;
}

void exploration_improvement(const PairedRuns& runs, double secs) {
  bool all_reached = true;
  std::vector<double> tg, tm;
  for (const auto& r : runs.greedy) {
    all_reached = all_reached && r.summary.t_95.has_value();
    if (r.summary.t_95) tg.push_back(*r.summary.t_95);
  }
  for (const auto& r : runs.mcf) {
    all_reached = all_reached && r.summary.t_95.has_value();
    if (r.summary.t_95) tm.push_back(*r.summary.t_95);
  }
  const bool have = !tg.empty() && !tm.empty();
  const double mg = have ? median(tg) : 0.0, mm = have ? median(tm) : 0.0;
  report(2, "office_s over 5 seeds: both reach 95%, median t_95 mcf <= greedy",
         all_reached && have && mm <= mg && secs < 600.0,
         fmt("median_t95 greedy=%.2fs mcf=%.2fs reached=%s runtime=%.1fs", mg, mm,
             all_reached ? "all" : "not all", secs));
}

void heterogeneous_access(const PairedRuns& runs) {
  const Scenario sc = apply_overrides(office_scenario(), office_config());
  const MissionConfig cfg = office_config();
  const VoxelGrid truth = rasterize_world(sc.bounds, sc.resolution, sc.boxes);
  const DistanceField field(truth, true);
  const SphereGraph graph = build_sphere_graph(
      truth, field, 1, SphereMapParams{cfg.r_sph, cfg.r_max, cfg.sphere_stride, cfg.goal_snap});
  const Vec3 hall = sc.uavs[0].start;
  const double s_p = sc.uavs[0].radius, s_s = sc.uavs[1].radius;

  bool access_ok = true;
  int gated = 0;
  std::string detail;
  for (const Region& r : sc.regions) {
    if (!r.gated) continue;
    ++gated;
    const Poi inside{(r.box.min + r.box.max) / 2.0, PoiSource::Centroid, 0, 0};
    const bool p = is_accessible(graph, hall, inside, s_p);
    const bool s = is_accessible(graph, hall, inside, s_s);
    access_ok = access_ok && !p && s;
    detail += fmt("%s p=%d s=%d; ", r.name.c_str(), p, s);
  }

  bool attribution_ok = true;
  std::size_t known = 0, by_p = 0, by_s_only = 0;
  for (const auto* set : {&runs.greedy, &runs.mcf})
    for (const auto& rec : *set)
      for (const RegionReport& r : rec.summary.regions) {
        if (!r.gated) continue;
        known += r.known;
        by_p += r.primary_seen;
        by_s_only += r.secondary_only;
        attribution_ok = attribution_ok && r.known > 0 && r.primary_seen == 0 &&
                         r.secondary_only == r.known;
      }
  detail += fmt("gated known=%zu sUAV-only=%zu pUAV-seen=%zu", known, by_s_only, by_p);
  report(3, "door admits sUAV only; gated rooms observed by sUAV only",
         gated >= 2 && access_ok && attribution_ok, detail);
}

// ---------------------------------------------------------------- 4
struct HeadOn {
  std::vector<std::string> sequence;
  bool escape_exact = true;
  int escapes = 0;
};

HeadOn scripted_head_on() {
  MissionConfig cfg = office_config();
  cfg.autonomy = false;
  Scenario sc = office_scenario();
  sc.uavs[0].start = Vec3(3.1, 7.5, 1.3);
  sc.uavs[1].start = Vec3(11.1, 7.5, 1.3);
  sc.uavs[1].heading = M_PI;
  Simulation sim(sc, cfg);
  sim.set_path(UavId::Primary, {Vec3(11.1, 7.5, 1.3)});
  sim.set_path(UavId::Secondary, {Vec3(3.1, 7.5, 1.3)});
  HeadOn out;
  std::size_t seen = 0;
  while (sim.time() < 30.0) {
    sim.step();
    const auto& ev = sim.record().events;
    for (; seen < ev.size(); ++seen) {
      const EventRow& e = ev[seen];
      if (e.kind != "halt" && e.kind != "escape" && e.kind != "resume") continue;
      out.sequence.push_back(e.kind);
      if (e.kind == "escape") {
        // Positions are unchanged between the guard tick and the end of the step.
        ++out.escapes;
        const Vec3 xp = sim.uavs()[0].position, xs = sim.uavs()[1].position;
        const Vec3 u = (xs - xp) / (xs - xp).norm();
        Vec3 expected = xs + u;
        expected.z() = xs.z();
        out.escape_exact = out.escape_exact && e.where == expected;
      }
    }
    if (!out.sequence.empty() && out.sequence.back() == "resume") break;
  }
  audited.push_back(sim.finish());
  return out;
}

void safety_protocol() {
  std::size_t runs = 0, violations = 0, floor_breaks = 0, faults = 0, guard_ticks = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const MetricsRecord& rec : audited) {
    ++runs;
    faults += rec.summary.collision_fault;
    // pUAV must not move between a non-Safe guard tick and the next guard tick.
    for (std::size_t i = 0; i + 1 < rec.guard.size(); ++i) {
      ++guard_ticks;
      if (rec.guard[i].zone != SafetyZone::Safe &&
          rec.guard[i + 1].primary_position != rec.guard[i].primary_position)
        ++violations;
    }
    for (const GuardSample& g : rec.guard)
      if (g.distance < rec.summary.safety_floor) ++floor_breaks;
    if (rec.summary.min_distance < rec.summary.safety_floor) ++floor_breaks;
    worst_margin = std::min(worst_margin, rec.summary.min_distance - rec.summary.safety_floor);
  }

  const HeadOn h = scripted_head_on();
  std::string seq;
  for (const auto& k : h.sequence) seq += (seq.empty() ? "" : ">") + k;
  const bool sequence_ok = h.sequence == std::vector<std::string>{"halt", "escape", "resume"};

  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-20, 20);
  bool equations_ok = h.escape_exact && h.escapes > 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 xp(u(rng), u(rng), u(rng)), xs(u(rng), u(rng), u(rng));
    const EscapeGoal g = escape_goal(xp, xs, u(rng));
    const Vec3 dir = (xs - xp) / (xs - xp).norm();
    equations_ok = equations_ok && g.goal.x() == xs.x() + dir.x() &&
                   g.goal.y() == xs.y() + dir.y() && g.goal.z() == xs.z();
  }
  report(4, "halt invariant, distance floor, head-on sequence, escape goal",
         violations == 0 && floor_breaks == 0 && faults == 0 && sequence_ok && equations_ok,
         fmt("runs=%zu guard_ticks=%zu halt_violations=%zu floor_breaks=%zu faults=%zu "
             "min_margin=%.4fm head_on=%s escape_exact=%d",
             runs + 1, guard_ticks, violations, floor_breaks, faults, worst_margin, seq.c_str(),
             equations_ok));
}

// ---------------------------------------------------------------- 5
void frontier_oracle() {
  std::mt19937_64 rng(5150);
  int frontier_mismatch = 0, cluster_mismatch = 0;
  std::size_t cells = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index3 dims{8 + int(rng() % 8), 8 + int(rng() % 8), 4 + int(rng() % 6)};
    const double p_free = 0.3 + 0.5 * std::uniform_real_distribution<double>()(rng);
    const VoxelGrid g = oracle::random_grid(rng, dims, 0.2, p_free, 0.1);
    const Aabb bounds{Vec3(0.2, 0.2, 0.0), g.bounds().max - Vec3(0.2, 0.0, 0.2)};
    const ExploredMap m = oracle::map_from(g, bounds);
    const auto fast = detect_frontiers(m);
    const auto slow = oracle::brute_frontiers(m);
    bool same = fast.size() == slow.size();
    for (std::size_t i = 0; same && i < fast.size(); ++i)
      same = fast[i].index == slow[i] && fast[i].position == g.cell_center(slow[i]);
    frontier_mismatch += !same;
    cells += fast.size();

    const double eps = 0.2 * (1 + trial % 4);
    std::set<std::vector<CellIndex>> got;
    for (const auto& c : cluster_frontiers(fast, eps)) {
      std::vector<CellIndex> ids;
      for (const FrontierCell& f : c) ids.push_back(f.index);
      std::sort(ids.begin(), ids.end());
      got.insert(ids);
    }
    cluster_mismatch += got != oracle::brute_clusters(fast, eps);
  }
  report(5, "frontiers and clusters equal brute force on 50 random maps",
         frontier_mismatch == 0 && cluster_mismatch == 0,
         fmt("frontier_mismatch=%d cluster_mismatch=%d frontier_cells=%zu", frontier_mismatch,
             cluster_mismatch, cells));
}

// ---------------------------------------------------------------- 6
void sphere_soundness() {
  // Snapshots: the full office, and partially explored maps along an MCF run.
  const Scenario sc = apply_overrides(office_scenario(), office_config());
  const MissionConfig cfg = office_config();
  const SphereMapParams params{cfg.r_sph, cfg.r_max, cfg.sphere_stride, cfg.goal_snap};
  std::vector<VoxelGrid> snapshots{rasterize_world(sc.bounds, sc.resolution, sc.boxes)};
  {
    Simulation sim(sc, cfg);
    for (double t : {20.0, 60.0, 120.0}) {
      while (sim.time() < t && !sim.done()) sim.step();
      snapshots.push_back(sim.map().grid());
    }
  }
  // Random boxes with unknown pockets, unrelated to the office geometry. Independent
  // per-cell noise would leave no cell with pUAV clearance.
  std::mt19937_64 rng(66);
  {
    const Aabb bounds{Vec3::Zero(), Vec3(8.0, 8.0, 2.4)};
    std::uniform_real_distribution<double> ux(0.0, 8.0), uz(0.0, 2.4), size(0.2, 1.6);
    auto random_box = [&] {
      const Vec3 lo(ux(rng), ux(rng), uz(rng));
      const Vec3 hi = lo + Vec3(size(rng), size(rng), size(rng));
      return Aabb{lo, hi.cwiseMin(bounds.max)};
    };
    std::vector<Aabb> boxes;
    for (int i = 0; i < 25; ++i) boxes.push_back(random_box());
    VoxelGrid g = rasterize_world(bounds, 0.2, boxes);
    for (int i = 0; i < 6; ++i) {
      const Aabb hole = random_box();
      for (CellIndex c = 0; c < g.size(); ++c)
        if (hole.contains(g.cell_center(c))) g.set(c, CellState::Unknown);
    }
    snapshots.push_back(std::move(g));
  }

  int queries = 0, accessible = 0, clearance_fail = 0, flood_fail = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const VoxelGrid& g = snapshots[s];
    const DistanceField field(g, true);
    const SphereGraph graph = build_sphere_graph(g, field, s + 1, params);
    const std::vector<double> clear_p = oracle::clearance_mask(g, 0.45, true);
    const std::vector<double> clear_s = oracle::clearance_mask(g, 0.25, true);
    std::vector<CellIndex> known_free;
    for (CellIndex i = 0; i < g.size(); ++i)
      if (g.state(i) == CellState::Free) known_free.push_back(i);
    for (int q = 0; q < 20; ++q) {
      const double radius = q % 2 ? 0.25 : 0.45;
      const std::vector<double>& clear = q % 2 ? clear_s : clear_p;
      // Start where a UAV of this radius can be; goal anywhere known-free.
      std::vector<CellIndex> starts;
      for (CellIndex i : known_free)
        if (clear[i] >= radius) starts.push_back(i);
      if (starts.empty()) continue;
      const CellIndex a = starts[rng() % starts.size()];
      ++queries;
      const CellIndex b = known_free[rng() % known_free.size()];
      const Vec3 start = g.cell_center(a), goal = g.cell_center(b);
      const auto path = plan(graph, start, goal, radius, cfg.safety_weight);
      const bool acc = is_accessible(graph, start, Poi{goal, PoiSource::Centroid, 0, b}, radius);
      if (path.has_value() != acc) ++flood_fail;
      if (!path) continue;
      ++accessible;
      for (const Vec3& w : path->waypoints) {
        const double d = oracle::brute_point_distance(g, w, true);
        worst = std::min(worst, d - radius);
        if (d < radius - 1e-9) ++clearance_fail;
      }
      const auto reach = oracle::dilated_flood(g, clear, g.coords(a), radius);
      const auto end = g.world_to_cell(g.cell_center(graph.nodes()[path->nodes.back()].cell));
      if (!end || !reach[g.index(*end)]) ++flood_fail;
    }
  }
  report(6, "sphere paths keep clearance; accessible verdicts confirmed by flood fill",
         queries >= 100 && clearance_fail == 0 && flood_fail == 0,
         fmt("queries=%d accessible=%d clearance_fail=%d flood_fail=%d min_margin=%.4fm", queries,
             accessible, clearance_fail, flood_fail, worst));
}

// ---------------------------------------------------------------- 7
void worst_case_allocation() {
  const MissionConfig cfg = load_config_file(kDir + "warehouse.cfg", office_config());
  const Scenario sc = apply_overrides(office_scenario(), cfg);
  MissionConfig scripted = cfg;
  scripted.autonomy = false;
  Simulation sim(sc, scripted);
  // The pUAV is parked; the sUAV sweeps the hall to build up a partial map.
  sim.set_path(UavId::Secondary, {Vec3(12.1, 3.1, 1.3), Vec3(12.1, 11.1, 1.3), Vec3(4.1, 11.1, 1.3)});
  std::vector<std::shared_ptr<const DecisionSnapshot>> snaps;
  for (double t : {0.0, 10.0, 20.0}) {
    while (sim.time() < t) sim.step();
    snaps.push_back(std::make_shared<DecisionSnapshot>(sim.snapshot()));
  }
  const AllocatorParams ap{cfg.alpha, cfg.beta, cfg.arc_budget, cfg.self_cost, cfg.safety_weight};
  bool ok = true;
  double worst_call = 0.0;
  std::size_t pois = 0;
  for (const auto& snap : snaps) {
    const UavState& p = sim.uavs()[0];
    const UavState& s = sim.uavs()[1];
    const AllocationInput in{snap->pois, {p.position, p.heading, p.radius},
                             {s.position, s.heading, s.radius}, &snap->graph};
    pois += snap->pois.size();
    for (Strategy st : {Strategy::Mcf, Strategy::Greedy}) {
      const auto t0 = Clock::now();
      const Assignment a = assign(st, in, ap);
      worst_call = std::max(worst_call, seconds_since(t0));
      bool s_valid = a.goal_s.has_value();
      if (a.goal_s) {
        bool listed = false;
        for (const Poi& q : snap->pois) listed = listed || q.position == a.goal_s->position;
        s_valid = listed && is_accessible(snap->graph, s.position, *a.goal_s, s.radius);
      }
      // No POI is reachable for the pUAV at all.
      bool p_blocked = true;
      for (const Poi& q : snap->pois)
        p_blocked = p_blocked && !is_accessible(snap->graph, p.position, q, p.radius);
      ok = ok && !a.goal_p && s_valid && p_blocked;
      if (st == Strategy::Mcf) ok = ok && a.total_cost >= cfg.self_cost;
    }
  }
  report(7, "large pUAV: allocation returns Stay for pUAV and a valid sUAV goal",
         ok && pois > 0 && worst_call < 2.0,
         fmt("snapshots=%zu pois=%zu worst_call=%.3fs", snaps.size(), pois, worst_call));
}

// ---------------------------------------------------------------- 8
void determinism(const PairedRuns& runs) {
  MissionConfig cfg = office_config();
  cfg.strategy = Strategy::Mcf;
  cfg.seed = 1;
  MetricsRecord again = run_mission(office_scenario(), cfg);
  const fs::path root = fs::temp_directory_path() / "hetex_acceptance";
  fs::remove_all(root);
  write_outputs(runs.mcf.front(), (root / "a").string());
  write_outputs(again, (root / "b").string());
  audited.push_back(std::move(again));
  bool same = true;
  std::size_t bytes = 0;
  for (const char* f : {"timeline.csv", "timings.csv", "events.csv", "summary.json"}) {
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const std::string x = slurp(root / "a" / f), y = slurp(root / "b" / f);
    same = same && !x.empty() && x == y;
    bytes += x.size();
  }
  fs::remove_all(root);
  report(8, "identical inputs give byte-identical outputs", same,
         fmt("compared=%zu bytes over 4 files", bytes));
}

}  // namespace

int main() {
  try {
    mcf_optimality();
    double secs = 0.0;
    const PairedRuns runs = paired_office_runs(5, secs);
    exploration_improvement(runs, secs);
    heterogeneous_access(runs);
    frontier_oracle();
    sphere_soundness();
    worst_case_allocation();
    determinism(runs);
    safety_protocol();
  } catch (const std::exception& e) {
    std::printf("[FAIL] aborted: %s\n", e.what());
    return 1;
  }
  std::printf("\n");
  for (const auto& [id, line] : results) std::printf("%s\n", line.c_str());
  std::printf("%d of %zu criteria failed\n", failures, results.size());
  return failures == 0 ? 0 : 1;
}
