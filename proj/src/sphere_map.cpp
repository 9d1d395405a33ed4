#include "hetex/sphere_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace hetex {

std::size_t SphereGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : adjacency_) n += adj.size();
  return n / 2;
}

int SphereGraph::node_at_lattice(int li, int lj, int lk) const {
  if (li < 0 || lj < 0 || lk < 0 || li >= lattice_dims_[0] || lj >= lattice_dims_[1] ||
      lk >= lattice_dims_[2])
    return -1;
  return lattice_[(static_cast<std::size_t>(li) * lattice_dims_[1] + lj) * lattice_dims_[2] + lk];
}

SphereGraph build_sphere_graph(const VoxelGrid& snapshot, const DistanceField& field,
                               std::uint64_t version, const SphereMapParams& params) {
  if (params.stride < 1) throw std::invalid_argument("sphere lattice stride must be >= 1");
  SphereGraph g;
  g.params_ = params;
  g.version_ = version;
  g.geometry_ = VoxelGrid(snapshot.origin(), snapshot.resolution(), snapshot.dims());
  const int s = params.stride;
  const Index3& d = snapshot.dims();
  g.lattice_dims_ = {(d[0] + s - 1) / s, (d[1] + s - 1) / s, (d[2] + s - 1) / s};
  g.lattice_.assign(static_cast<std::size_t>(g.lattice_dims_[0]) * g.lattice_dims_[1] *
                        g.lattice_dims_[2],
                    -1);

  for (int li = 0; li < g.lattice_dims_[0]; ++li)
    for (int lj = 0; lj < g.lattice_dims_[1]; ++lj)
      for (int lk = 0; lk < g.lattice_dims_[2]; ++lk) {
        const Index3 c{li * s, lj * s, lk * s};
        const CellIndex idx = snapshot.index(c);
        if (snapshot.state(idx) != CellState::Free) continue;
        const double dist = field.at(idx);
        if (dist < params.r_sph) continue;
        g.lattice_[(static_cast<std::size_t>(li) * g.lattice_dims_[1] + lj) * g.lattice_dims_[2] +
                   lk] = static_cast<int>(g.nodes_.size());
        g.nodes_.push_back({snapshot.cell_center(c), std::min(dist, params.r_max), idx});
      }

  g.adjacency_.assign(g.nodes_.size(), {});
  for (std::size_t n = 0; n < g.nodes_.size(); ++n) {
    const Index3 c = snapshot.coords(g.nodes_[n].cell);
    const int li = c[0] / s, lj = c[1] / s, lk = c[2] / s;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        for (int dk = -1; dk <= 1; ++dk) {
          // Each undirected edge once: only lexicographically positive offsets.
          if (std::make_tuple(di, dj, dk) <= std::make_tuple(0, 0, 0)) continue;
          const int m = g.node_at_lattice(li + di, lj + dj, lk + dk);
          if (m < 0) continue;
          const SphereNode& a = g.nodes_[n];
          const SphereNode& b = g.nodes_[m];
          const double len = (a.center - b.center).norm();
          if (!(len < a.radius + b.radius)) continue;
          double clearance = std::min(a.radius, b.radius);
          for (int t = 1; t < s; ++t) {
            const Index3 mid{c[0] + di * t, c[1] + dj * t, c[2] + dk * t};
            if (!snapshot.in_bounds(mid)) {
              clearance = 0.0;
              break;
            }
            clearance = std::min(clearance, field.at(mid));
          }
          g.adjacency_[n].push_back({m, len, clearance});
          g.adjacency_[m].push_back({static_cast<int>(n), len, clearance});
        }
  }
  for (auto& adj : g.adjacency_)
    std::sort(adj.begin(), adj.end(),
              [](const SphereEdge& x, const SphereEdge& y) { return x.to < y.to; });
  return g;
}

SphereGraph update(const SphereGraph& graph, const ExploredMap& map,
                   const SphereMapParams& params) {
  if (!graph.empty() && graph.built_from_version() == map.version()) return graph;
  const DistanceField field(map.grid(), true);
  return build_sphere_graph(map.grid(), field, map.version(), params);
}

int SphereGraph::attach(const Vec3& p, double uav_radius) const {
  if (nodes_.empty()) return -1;
  const double reach = std::max(params_.r_max, params_.goal_snap);
  const double cell = geometry_.resolution() * params_.stride;
  const Index3 pc = geometry_.world_to_cell_unchecked(p);
  const int span = static_cast<int>(std::ceil(reach / cell)) + 1;
  const int s = params_.stride;
  int inside = -1, near = -1;
  double inside_d = std::numeric_limits<double>::infinity();
  double near_d = inside_d;
  const int bi = static_cast<int>(std::floor(static_cast<double>(pc[0]) / s));
  const int bj = static_cast<int>(std::floor(static_cast<double>(pc[1]) / s));
  const int bk = static_cast<int>(std::floor(static_cast<double>(pc[2]) / s));
  for (int li = bi - span; li <= bi + span; ++li)
    for (int lj = bj - span; lj <= bj + span; ++lj)
      for (int lk = bk - span; lk <= bk + span; ++lk) {
        const int n = node_at_lattice(li, lj, lk);
        if (n < 0) continue;
        const SphereNode& node = nodes_[n];
        if (node.radius < uav_radius) continue;
        const double d = (node.center - p).norm();
        if (d <= node.radius && (d < inside_d || (d == inside_d && n < inside))) {
          inside = n;
          inside_d = d;
        }
        if (d <= params_.goal_snap && (d < near_d || (d == near_d && n < near))) {
          near = n;
          near_d = d;
        }
      }
  return inside >= 0 ? inside : near;
}

SpherePlanner::SpherePlanner(const SphereGraph& graph, const Vec3& start, double uav_radius,
                             double safety_weight, const Vec3& keep_out_center,
                             double keep_out_radius)
    : graph_(&graph), start_(start), uav_radius_(uav_radius) {
  if (!(uav_radius > 0.0)) throw std::invalid_argument("uav_radius must be positive");
  start_node_ = graph.attach(start, uav_radius);
  if (start_node_ < 0) return;
  const auto& nodes = graph.nodes();
  dist_.assign(nodes.size(), std::numeric_limits<double>::infinity());
  parent_.assign(nodes.size(), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist_[start_node_] = 0.0;
  open.push({0.0, start_node_});
  while (!open.empty()) {
    const auto [d, n] = open.top();
    open.pop();
    if (d > dist_[n]) continue;
    for (const SphereEdge& e : graph.neighbors(n)) {
      if (e.clearance < uav_radius || nodes[e.to].radius < uav_radius) continue;
      if (keep_out_radius > 0.0 &&
          (nodes[e.to].center - keep_out_center).norm() < keep_out_radius)
        continue;
      const double w =
          e.length * (1.0 + safety_weight / std::min(nodes[n].radius, nodes[e.to].radius));
      const double nd = d + w;
      if (nd < dist_[e.to]) {
        dist_[e.to] = nd;
        parent_[e.to] = n;
        open.push({nd, e.to});
      }
    }
  }
}

std::optional<SpherePath> SpherePlanner::path_to(const Vec3& goal) const {
  if (start_node_ < 0) return std::nullopt;
  const int goal_node = graph_->attach(goal, uav_radius_);
  if (goal_node < 0 || !std::isfinite(dist_[goal_node])) return std::nullopt;
  const auto& nodes = graph_->nodes();

  SpherePath path;
  for (int n = goal_node; n >= 0; n = parent_[n]) path.nodes.push_back(n);
  std::reverse(path.nodes.begin(), path.nodes.end());
  path.cost = dist_[goal_node];

  const SphereNode& first = nodes[path.nodes.front()];
  const bool skip_first = (start_ - first.center).norm() <= first.radius - uav_radius_;
  path.min_clearance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    const SphereNode& node = nodes[path.nodes[i]];
    path.min_clearance = std::min(path.min_clearance, node.radius);
    if (i == 0 && skip_first) continue;
    path.waypoints.push_back(node.center);
  }
  // Final point: the goal pulled into the terminal ball far enough to keep
  // uav_radius of clearance.
  const SphereNode& last = nodes[goal_node];
  const Vec3 offset = goal - last.center;
  const double reach = last.radius - uav_radius_;
  const double off = offset.norm();
  Vec3 final_point = goal;
  if (off > reach) final_point = reach > 0.0 ? Vec3(last.center + offset * (reach / off)) : last.center;
  if (path.waypoints.empty() || path.waypoints.back() != final_point)
    path.waypoints.push_back(final_point);

  Vec3 prev = start_;
  for (const Vec3& w : path.waypoints) {
    path.length_m += (w - prev).norm();
    prev = w;
  }
  path.waypoint_count = static_cast<int>(path.waypoints.size());
  return path;
}

std::optional<SpherePath> plan(const SphereGraph& graph, const Vec3& start, const Vec3& goal,
                               double uav_radius, double safety_weight,
                               const Vec3& keep_out_center, double keep_out_radius) {
  return SpherePlanner(graph, start, uav_radius, safety_weight, keep_out_center, keep_out_radius)
      .path_to(goal);
}

bool is_accessible(const SphereGraph& graph, const Vec3& from, const Poi& poi, double uav_radius) {
  return plan(graph, from, poi.position, uav_radius, 0.0).has_value();
}

}  // namespace hetex
