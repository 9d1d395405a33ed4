#include "hetex/mission_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace hetex {

void tick_monitoring(PlannerState& state, UavPair& uavs, double goal_tolerance) {
  for (UavState& u : uavs) {
    if (u.guard_controlled) continue;
    if (u.goal) {
      const bool arrived = (u.position - u.goal->position).norm() <= goal_tolerance;
      if (arrived || !u.has_path()) {
        state.visited.push_back(u.goal->position);
        u.goal.reset();
        u.active_path.clear();
        u.hold_heading.reset();
        state.waiting.insert(u.id);
      }
    } else if (!u.has_path()) {
      state.waiting.insert(u.id);
    }
  }
  if (!state.waiting.empty()) state.mode = PlannerMode::Planning;
}

namespace {

bool near_any(const Vec3& p, const std::vector<Vec3>& points, double radius) {
  return std::any_of(points.begin(), points.end(),
                     [&](const Vec3& q) { return (p - q).norm() <= radius; });
}

}  // namespace

PlanningOutcome tick_planning(PlannerState& state, const DecisionSnapshot& snapshot,
                              UavPair& uavs, const PlannerParams& params) {
  PlanningOutcome out;
  if (state.mode != PlannerMode::Planning) return out;
  if (state.last_map_version && snapshot.version <= *state.last_map_version) return out;
  state.last_map_version = snapshot.version;
  out.ran = true;

  // Goals still being flown by a busy UAV are not offered again.
  std::vector<Vec3> busy_goals;
  for (const UavState& u : uavs)
    if (!state.waiting.count(u.id) && u.goal) busy_goals.push_back(u.goal->position);

  std::vector<Poi> candidates;
  for (const Poi& p : snapshot.pois) {
    if (near_any(p.position, state.visited, params.goal_tolerance)) continue;
    if (near_any(p.position, busy_goals, params.goal_tolerance)) continue;
    candidates.push_back(p);
  }
  out.poi_count = candidates.size();

  const UavState& p = uavs[index_of(UavId::Primary)];
  const UavState& s = uavs[index_of(UavId::Secondary)];
  AllocationInput in{candidates,
                     {p.position, p.heading, p.radius},
                     {s.position, s.heading, s.radius},
                     &snapshot.graph};
  out.assignment = assign(params.strategy, in, params.allocator);

  for (UavState& u : uavs) {
    if (!state.waiting.count(u.id) || u.guard_controlled) continue;
    std::optional<Poi> goal =
        u.id == UavId::Primary ? out.assignment.goal_p : out.assignment.goal_s;
    // A pUAV without a goal flies home rather than parking wherever it stopped,
    // where it can block the sUAV's way out of a room.
    if (!goal && u.id == UavId::Primary && params.primary_home &&
        (u.position - *params.primary_home).norm() > params.goal_tolerance)
      goal = Poi{*params.primary_home, PoiSource::Centroid, -1, 0};
    if (!goal) continue;  // Stay: hold position this cycle
    std::optional<SpherePath> path;
    if (u.id == UavId::Secondary && params.keep_out > 0.0)
      path = plan(snapshot.graph, u.position, goal->position, u.radius,
                  params.allocator.safety_weight, uavs[index_of(UavId::Primary)].position,
                  params.keep_out);
    if (!path)
      path = plan(snapshot.graph, u.position, goal->position, u.radius,
                  params.allocator.safety_weight);
    if (!path) continue;
    std::vector<Vec3> waypoints =
        params.smoothing ? shortcut_path(snapshot.field, u.position, path->waypoints, u.radius)
                         : path->waypoints;
    double length = 0.0;
    Vec3 prev = u.position;
    for (const Vec3& w : waypoints) {
      length += (w - prev).norm();
      prev = w;
    }
    u.active_path.assign(waypoints.begin(), waypoints.end());
    u.goal = goal;
    u.hold_heading.reset();
    state.waiting.erase(u.id);
    out.dispatches.push_back({u.id, *goal, static_cast<int>(waypoints.size()), length});
  }
  state.mode = PlannerMode::Monitoring;
  return out;
}

bool segment_clear(const DistanceField& field, const Vec3& a, const Vec3& b, double uav_radius) {
  const double step = field.geometry().resolution() / 4.0;
  const double len = (b - a).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= n; ++i) {
    const Vec3 p = a + (b - a) * (static_cast<double>(i) / n);
    if (field.clearance_lower_bound(p) < uav_radius) return false;
  }
  return true;
}

std::vector<Vec3> shortcut_path(const DistanceField& field, const Vec3& start,
                                const std::vector<Vec3>& waypoints, double uav_radius) {
  std::vector<Vec3> out;
  Vec3 cur = start;
  std::size_t i = 0;
  while (i < waypoints.size()) {
    std::size_t next = i;
    for (std::size_t j = waypoints.size(); j-- > i + 1;) {
      if (segment_clear(field, cur, waypoints[j], uav_radius)) {
        next = j;
        break;
      }
    }
    out.push_back(waypoints[next]);
    cur = waypoints[next];
    i = next + 1;
  }
  return out;
}

namespace {

constexpr int kNeighbors = 26;

struct Offsets {
  std::array<Index3, kNeighbors> d;
  std::array<double, kNeighbors> len;
};

Offsets make_offsets(double res) {
  Offsets o{};
  int n = 0;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      for (int k = -1; k <= 1; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        o.d[n] = {i, j, k};
        o.len[n] = std::sqrt(static_cast<double>(i * i + j * j + k * k)) * res;
        ++n;
      }
  return o;
}

}  // namespace

std::optional<GridPath> grid_astar(const DistanceField& field, const Vec3& start,
                                   const Vec3& goal, double uav_radius, double relax_radius) {
  const VoxelGrid& g = field.geometry();
  const auto start_cell = g.world_to_cell(start);
  if (!start_cell) throw std::domain_error("grid_astar start outside the grid");
  const CellIndex s = g.index(*start_cell);
  auto passable = [&](CellIndex idx) { return idx == s || field.at(idx) >= uav_radius; };
  const Offsets off = make_offsets(g.resolution());

  // Reachable set from the start.
  std::vector<char> reach(g.size(), 0);
  {
    std::vector<CellIndex> stack{s};
    reach[s] = 1;
    while (!stack.empty()) {
      const Index3 c = g.coords(stack.back());
      stack.pop_back();
      for (const Index3& d : off.d) {
        const Index3 n{c[0] + d[0], c[1] + d[1], c[2] + d[2]};
        if (!g.in_bounds(n)) continue;
        const CellIndex ni = g.index(n);
        if (reach[ni] || !passable(ni)) continue;
        reach[ni] = 1;
        stack.push_back(ni);
      }
    }
  }

  std::optional<CellIndex> target;
  if (auto gc = g.world_to_cell(goal); gc && reach[g.index(*gc)]) {
    target = g.index(*gc);
  } else {
    const Index3 centre = g.world_to_cell_unchecked(goal);
    const int span = static_cast<int>(std::ceil(relax_radius / g.resolution())) + 1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = centre[0] - span; i <= centre[0] + span; ++i)
      for (int j = centre[1] - span; j <= centre[1] + span; ++j)
        for (int k = centre[2] - span; k <= centre[2] + span; ++k) {
          const Index3 c{i, j, k};
          if (!g.in_bounds(c)) continue;
          const CellIndex idx = g.index(c);
          if (!reach[idx]) continue;
          const double d = (g.cell_center(c) - goal).norm();
          if (d > relax_radius) continue;
          if (d < best || (d == best && idx < *target)) {
            best = d;
            target = idx;
          }
        }
  }
  if (!target) return std::nullopt;

  const Vec3 goal_center = g.cell_center(*target);
  std::vector<double> gcost(g.size(), std::numeric_limits<double>::infinity());
  std::vector<CellIndex> parent(g.size(), std::numeric_limits<CellIndex>::max());
  std::vector<char> closed(g.size(), 0);
  using Entry = std::pair<double, CellIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  gcost[s] = 0.0;
  open.push({(g.cell_center(s) - goal_center).norm(), s});
  while (!open.empty()) {
    const CellIndex cur = open.top().second;
    open.pop();
    if (closed[cur]) continue;
    closed[cur] = 1;
    if (cur == *target) break;
    const Index3 c = g.coords(cur);
    for (int n = 0; n < kNeighbors; ++n) {
      const Index3 nc{c[0] + off.d[n][0], c[1] + off.d[n][1], c[2] + off.d[n][2]};
      if (!g.in_bounds(nc)) continue;
      const CellIndex ni = g.index(nc);
      if (closed[ni] || !passable(ni)) continue;
      const double ng = gcost[cur] + off.len[n];
      if (ng < gcost[ni]) {
        gcost[ni] = ng;
        parent[ni] = cur;
        open.push({ng + (g.cell_center(nc) - goal_center).norm(), ni});
      }
    }
  }
  if (!closed[*target]) return std::nullopt;

  GridPath path;
  path.cost = gcost[*target];
  path.accepted_goal = goal_center;
  for (CellIndex c = *target;; c = parent[c]) {
    path.waypoints.push_back(g.cell_center(c));
    if (c == s) break;
  }
  std::reverse(path.waypoints.begin(), path.waypoints.end());
  return path;
}

}  // namespace hetex
