#include "hetex/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hetex {

const char* to_string(Strategy s) { return s == Strategy::Greedy ? "greedy" : "mcf"; }

Strategy parse_strategy(const std::string& name) {
  if (name == "greedy") return Strategy::Greedy;
  if (name == "mcf") return Strategy::Mcf;
  throw std::invalid_argument("unknown allocator strategy: " + name);
}

std::int64_t to_milli(double cost) { return std::llround(cost * 1000.0); }

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);  // [-pi, pi]
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

double greedy_cost_p(const Vec3& x_p, const Vec3& g) { return (x_p - g).norm(); }

double greedy_cost_s(const Vec3& x_s, double phi_s, const Vec3& g, double alpha, double beta) {
  const Vec3 d = g - x_s;
  double heading_term = 0.0;
  if (d.x() != 0.0 || d.y() != 0.0) {
    const double theta = std::atan2(d.y(), d.x());
    heading_term = std::abs(wrap_angle(phi_s - theta));
  }
  return alpha * d.norm() + beta * heading_term;
}

FlowNetwork::FlowNetwork(std::size_t uav_count, std::vector<Poi> pois)
    : uav_count_(uav_count), pois_(std::move(pois)) {
  for (std::size_t u = 0; u < uav_count_; ++u) arcs_.push_back({source(), uav_node(u), 1, 0});
  for (std::size_t p = 0; p < pois_.size(); ++p) arcs_.push_back({poi_node(p), sink(), 1, 0});
  for (std::size_t u = 0; u < uav_count_; ++u) arcs_.push_back({self_node(u), sink(), 1, 0});
}

int FlowNetwork::balance(int node) const {
  if (node == source()) return static_cast<int>(uav_count_);
  if (node == sink()) return -static_cast<int>(uav_count_);
  return 0;
}

void FlowNetwork::add_poi_arc(std::size_t uav, std::size_t poi, std::int64_t cost) {
  if (uav >= uav_count_ || poi >= pois_.size()) throw std::out_of_range("flow arc endpoint");
  if (cost < 0) throw std::invalid_argument("flow arc cost must be non-negative");
  arcs_.push_back({uav_node(uav), poi_node(poi), 1, cost});
}

void FlowNetwork::add_self_arc(std::size_t uav, std::int64_t cost) {
  if (uav >= uav_count_) throw std::out_of_range("flow arc endpoint");
  if (cost < 0) throw std::invalid_argument("flow arc cost must be non-negative");
  arcs_.push_back({uav_node(uav), self_node(uav), 1, cost});
}

std::vector<std::size_t> FlowNetwork::uav_arcs(std::size_t uav) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < arcs_.size(); ++a)
    if (arcs_[a].from == uav_node(uav)) out.push_back(a);
  return out;
}

FlowSolution solve_min_cost_flow(const FlowNetwork& net) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  const auto& arcs = net.arcs();
  const int n = static_cast<int>(net.node_count());

  // Residual arc 2a is arc a forward, 2a+1 its reverse.
  std::vector<int> residual(2 * arcs.size());
  std::vector<std::vector<int>> out(n);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    residual[2 * a] = arcs[a].capacity;
    residual[2 * a + 1] = 0;
    out[arcs[a].from].push_back(static_cast<int>(2 * a));
    out[arcs[a].to].push_back(static_cast<int>(2 * a + 1));
  }
  auto head = [&](int r) { return r % 2 == 0 ? arcs[r / 2].to : arcs[r / 2].from; };
  auto cost = [&](int r) { return r % 2 == 0 ? arcs[r / 2].cost : -arcs[r / 2].cost; };

  std::vector<std::int64_t> potential(n, 0);
  std::vector<std::int64_t> dist(n);
  std::vector<int> via(n);
  std::vector<char> done(n);
  FlowSolution sol;
  for (int unit = 0; unit < net.balance(net.source()); ++unit) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(via.begin(), via.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    dist[net.source()] = 0;
    // Dense Dijkstra on reduced costs; ties settle the lower node id first and
    // keep the earliest residual arc that reached a node.
    while (true) {
      int u = -1;
      for (int v = 0; v < n; ++v)
        if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
      if (u < 0) break;
      done[u] = 1;
      if (u == net.sink()) break;
      for (int r : out[u]) {
        if (residual[r] == 0) continue;
        const int v = head(r);
        const std::int64_t nd = dist[u] + cost(r) + potential[u] - potential[v];
        if (nd < dist[v]) {
          dist[v] = nd;
          via[v] = r;
        }
      }
    }
    if (dist[net.sink()] >= kInf) throw std::logic_error("flow network is infeasible");
    // Only settled nodes move; this keeps every residual reduced cost >= 0.
    for (int v = 0; v < n; ++v)
      if (done[v]) potential[v] += dist[v] - dist[net.sink()];
    for (int v = net.sink(); v != net.source();) {
      const int r = via[v];
      --residual[r];
      ++residual[r ^ 1];
      v = r % 2 == 0 ? arcs[r / 2].from : arcs[r / 2].to;
    }
  }

  sol.flow.resize(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    sol.flow[a] = residual[2 * a + 1];
    sol.cost += sol.flow[a] * arcs[a].cost;
  }
  sol.goal.assign(net.uav_count(), std::nullopt);
  for (std::size_t u = 0; u < net.uav_count(); ++u) {
    for (std::size_t a : net.uav_arcs(u)) {
      if (sol.flow[a] == 0) continue;
      const int to = arcs[a].to;
      if (to != net.self_node(u)) sol.goal[u] = static_cast<std::size_t>(to - net.poi_node(0));
    }
  }
  return sol;
}

namespace {

// POI indices ordered by cost, ties broken by lexicographic position.
std::vector<std::size_t> priority_order(std::span<const Poi> pois, const std::vector<double>& cost) {
  std::vector<std::size_t> order(pois.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cost[a] != cost[b]) return cost[a] < cost[b];
    return lex_less(pois[a].position, pois[b].position);
  });
  return order;
}

struct UavQueue {
  std::vector<double> heuristic;
  std::vector<std::size_t> order;
};

UavQueue queue_for(const AllocationInput& in, const AllocatorParams& params, bool primary) {
  UavQueue q;
  q.heuristic.reserve(in.pois.size());
  for (const Poi& g : in.pois) {
    q.heuristic.push_back(primary ? greedy_cost_p(in.primary.position, g.position)
                                  : greedy_cost_s(in.secondary.position, in.secondary.heading,
                                                  g.position, params.alpha, params.beta));
  }
  q.order = priority_order(in.pois, q.heuristic);
  return q;
}

void check_input(const AllocationInput& in, const AllocatorParams& params) {
  if (in.graph == nullptr) throw std::invalid_argument("allocation needs a sphere graph");
  if (params.arc_budget < 1) throw std::invalid_argument("arc budget N must be >= 1");
  if (params.alpha < 0.0 || params.beta < 0.0)
    throw std::invalid_argument("alpha and beta must be non-negative");
}

std::int64_t arc_cost(double heuristic, const SpherePath& path) {
  return to_milli(heuristic + static_cast<double>(path.waypoint_count));
}

}  // namespace

FlowNetwork build_network(const AllocationInput& in, const AllocatorParams& params) {
  check_input(in, params);
  FlowNetwork net(kUavCount, std::vector<Poi>(in.pois.begin(), in.pois.end()));
  for (std::size_t u = 0; u < kUavCount; ++u) {
    const bool primary = u == index_of(UavId::Primary);
    const UavPose& pose = primary ? in.primary : in.secondary;
    const UavQueue q = queue_for(in, params, primary);
    const SpherePlanner planner(*in.graph, pose.position, pose.radius, params.safety_weight);
    int found = 0;
    for (std::size_t i = 0; i < q.order.size() && found < params.arc_budget; ++i) {
      const std::size_t p = q.order[i];
      const auto path = planner.path_to(in.pois[p].position);
      if (!path) continue;
      const std::int64_t c = arc_cost(q.heuristic[p], *path);
      if (c >= params.self_cost)
        throw std::logic_error("self-arc cost does not exceed a realizable arc cost");
      net.add_poi_arc(u, p, c);
      ++found;
    }
    net.add_self_arc(u, params.self_cost);
  }
  return net;
}

Assignment solve_mcf(const FlowNetwork& net) {
  if (net.uav_count() != kUavCount) throw std::invalid_argument("solve_mcf expects two UAVs");
  const FlowSolution sol = solve_min_cost_flow(net);
  Assignment out;
  if (sol.goal[0]) out.goal_p = net.pois()[*sol.goal[0]];
  if (sol.goal[1]) out.goal_s = net.pois()[*sol.goal[1]];
  out.total_cost = sol.cost;
  out.arc_count = net.arcs().size() - net.pois().size() - 3 * net.uav_count();
  return out;
}

Assignment greedy_assign(const AllocationInput& in, const AllocatorParams& params) {
  check_input(in, params);
  Assignment out;
  std::optional<std::size_t> taken;

  const UavQueue qp = queue_for(in, params, true);
  const SpherePlanner pp(*in.graph, in.primary.position, in.primary.radius, params.safety_weight);
  std::int64_t cost_p = params.self_cost;
  for (std::size_t p : qp.order) {
    if (auto path = pp.path_to(in.pois[p].position)) {
      out.goal_p = in.pois[p];
      taken = p;
      cost_p = arc_cost(qp.heuristic[p], *path);
      break;
    }
  }

  const UavQueue qs = queue_for(in, params, false);
  const SpherePlanner ps(*in.graph, in.secondary.position, in.secondary.radius,
                         params.safety_weight);
  std::int64_t cost_s = params.self_cost;
  for (std::size_t p : qs.order) {
    if (taken && *taken == p) continue;
    if (auto path = ps.path_to(in.pois[p].position)) {
      out.goal_s = in.pois[p];
      cost_s = arc_cost(qs.heuristic[p], *path);
      break;
    }
  }
  out.total_cost = cost_p + cost_s;
  return out;
}

Assignment assign(Strategy strategy, const AllocationInput& in, const AllocatorParams& params) {
  if (strategy == Strategy::Greedy) return greedy_assign(in, params);
  return solve_mcf(build_network(in, params));
}

}  // namespace hetex
