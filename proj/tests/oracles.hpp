// Brute-force reference implementations shared by the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "hetex/distance_field.hpp"
#include "hetex/frontier_finder.hpp"
#include "hetex/occupancy_map.hpp"
#include "hetex/voxel_grid.hpp"

namespace oracle {

using hetex::CellIndex;
using hetex::CellState;
using hetex::Index3;
using hetex::Vec3;
using hetex::VoxelGrid;

// Random ternary grid; p_free / p_occ are per-cell probabilities, rest Unknown.
inline VoxelGrid random_grid(std::mt19937_64& rng, const Index3& dims, double res, double p_free,
                             double p_occ) {
  VoxelGrid g(Vec3::Zero(), res, dims);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (CellIndex i = 0; i < g.size(); ++i) {
    const double x = u(rng);
    g.set(i, x < p_free ? CellState::Free : (x < p_free + p_occ ? CellState::Occupied
                                                                : CellState::Unknown));
  }
  return g;
}

// Nearest obstacle centre by scanning every cell.
inline double brute_distance(const VoxelGrid& g, const Index3& c, bool unknown_is_obstacle) {
  double best = std::numeric_limits<double>::infinity();
  const Vec3 p = g.cell_center(c);
  for (CellIndex i = 0; i < g.size(); ++i) {
    const CellState s = g.state(i);
    if (s == CellState::Occupied || (unknown_is_obstacle && s == CellState::Unknown))
      best = std::min(best, (g.cell_center(i) - p).norm());
  }
  return best;
}

// Point-to-nearest-obstacle-centre distance for an arbitrary point.
inline double brute_point_distance(const VoxelGrid& g, const Vec3& p, bool unknown_is_obstacle) {
  double best = std::numeric_limits<double>::infinity();
  for (CellIndex i = 0; i < g.size(); ++i) {
    const CellState s = g.state(i);
    if (s == CellState::Occupied || (unknown_is_obstacle && s == CellState::Unknown))
      best = std::min(best, (g.cell_center(i) - p).norm());
  }
  return best;
}

// Per cell: infinity when no obstacle centre lies closer than `radius`, else 0.
// Only the cube of cells that could be that close is searched.
inline std::vector<double> clearance_mask(const VoxelGrid& g, double radius,
                                          bool unknown_is_obstacle) {
  const int reach = static_cast<int>(std::ceil(radius / g.resolution()));
  const Index3 d = g.dims();
  std::vector<double> out(g.size(), std::numeric_limits<double>::infinity());
  for (CellIndex i = 0; i < g.size(); ++i) {
    const Index3 c = g.coords(i);
    const Vec3 p = g.cell_center(c);
    bool blocked = false;
    for (int a = std::max(0, c[0] - reach); !blocked && a <= std::min(d[0] - 1, c[0] + reach); ++a)
      for (int b = std::max(0, c[1] - reach); !blocked && b <= std::min(d[1] - 1, c[1] + reach); ++b)
        for (int e = std::max(0, c[2] - reach); e <= std::min(d[2] - 1, c[2] + reach); ++e) {
          const CellState s = g.state(Index3{a, b, e});
          if ((s == CellState::Occupied || (unknown_is_obstacle && s == CellState::Unknown)) &&
              (g.cell_center(Index3{a, b, e}) - p).norm() < radius) {
            blocked = true;
            break;
          }
        }
    if (blocked) out[i] = 0.0;
  }
  return out;
}

// 26-connected flood fill over cells whose brute-force obstacle distance is at
// least `radius`. The start cell is always admitted.
inline std::vector<char> dilated_flood(const VoxelGrid& g, const std::vector<double>& dist,
                                       const Index3& start, double radius) {
  std::vector<char> seen(g.size(), 0);
  std::queue<Index3> q;
  seen[g.index(start)] = 1;
  q.push(start);
  while (!q.empty()) {
    const Index3 c = q.front();
    q.pop();
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        for (int dk = -1; dk <= 1; ++dk) {
          const Index3 n{c[0] + di, c[1] + dj, c[2] + dk};
          if (!g.in_bounds(n)) continue;
          const CellIndex ni = g.index(n);
          if (seen[ni] || dist[ni] < radius) continue;
          seen[ni] = 1;
          q.push(n);
        }
  }
  return seen;
}

inline hetex::ExploredMap map_from(const VoxelGrid& g, const hetex::Aabb& bounds) {
  hetex::ExploredMap m(g, bounds);
  for (CellIndex i = 0; i < g.size(); ++i)
    if (g.state(i) != CellState::Unknown) m.mark(i, g.state(i), hetex::UavId::Primary);
  return m;
}

// Every cell checked against its six face neighbours.
inline std::vector<CellIndex> brute_frontiers(const hetex::ExploredMap& m) {
  const VoxelGrid& g = m.grid();
  const hetex::Aabb& b = m.explore_bounds();
  std::vector<CellIndex> out;
  const int off[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (CellIndex i = 0; i < g.size(); ++i) {
    if (g.state(i) != CellState::Free || !b.contains(g.cell_center(i))) continue;
    const Index3 c = g.coords(i);
    for (const auto& o : off) {
      const Index3 n{c[0] + o[0], c[1] + o[1], c[2] + o[2]};
      if (!g.in_bounds(n)) continue;
      if (g.state(n) == CellState::Unknown && b.contains(g.cell_center(n))) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

// Components from the full pairwise distance matrix, as sorted index sets.
inline std::set<std::vector<CellIndex>> brute_clusters(const std::vector<hetex::FrontierCell>& cells,
                                                      double eps) {
  const std::size_t n = cells.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((cells[i].position - cells[j].position).norm() <= eps) parent[find(i)] = find(j);
  std::map<std::size_t, std::vector<CellIndex>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(cells[i].index);
  std::set<std::vector<CellIndex>> out;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.insert(members);
  }
  return out;
}

}  // namespace oracle
