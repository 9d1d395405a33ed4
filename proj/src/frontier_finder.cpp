#include "hetex/frontier_finder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "hetex/rng.hpp"

namespace hetex {

std::vector<FrontierCell> detect_frontiers(const ExploredMap& map) {
  static constexpr int kFaces[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                       {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  const VoxelGrid& g = map.grid();
  const Index3& lo = map.explore_lo();
  const Index3& hi = map.explore_hi();
  std::vector<FrontierCell> out;
  for (int i = lo[0]; i <= hi[0]; ++i) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      for (int k = lo[2]; k <= hi[2]; ++k) {
        const Index3 c{i, j, k};
        const CellIndex idx = g.index(c);
        if (g.state(idx) != CellState::Free) continue;
        for (const auto& f : kFaces) {
          const Index3 n{i + f[0], j + f[1], k + f[2]};
          if (map.in_explore_bounds(n) && g.state(n) == CellState::Unknown) {
            out.push_back({idx, g.cell_center(c)});
            break;
          }
        }
      }
    }
  }
  return out;
}

std::vector<FrontierCluster> cluster_frontiers(std::span<const FrontierCell> cells, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("cluster eps must be positive");
  std::vector<FrontierCell> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const FrontierCell& a, const FrontierCell& b) { return a.index < b.index; });

  // Bucket by eps-sized cubes; linked pairs are always in adjacent buckets.
  auto key_of = [eps](const Vec3& p) {
    return std::array<std::int64_t, 3>{static_cast<std::int64_t>(std::floor(p.x() / eps)),
                                       static_cast<std::int64_t>(std::floor(p.y() / eps)),
                                       static_cast<std::int64_t>(std::floor(p.z() / eps))};
  };
  std::map<std::array<std::int64_t, 3>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < sorted.size(); ++i) buckets[key_of(sorted[i].position)].push_back(i);

  const double eps2 = eps * eps;
  UnionFind uf(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto key = key_of(sorted[i].position);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = buckets.find({key[0] + dx, key[1] + dy, key[2] + dz});
          if (it == buckets.end()) continue;
          for (std::size_t j : it->second) {
            if (j <= i) continue;
            if ((sorted[i].position - sorted[j].position).squaredNorm() <= eps2) uf.unite(i, j);
          }
        }
  }

  std::vector<FrontierCluster> clusters;
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(uf.find(i), clusters.size());
    if (inserted) clusters.emplace_back();
    clusters[it->second].push_back(sorted[i]);
  }
  return clusters;
}

std::vector<Poi> generate_pois(const std::vector<FrontierCluster>& clusters,
                               const ExploredMap& map, int samples_per_cluster,
                               int min_cluster_for_sampling, std::uint64_t seed) {
  if (samples_per_cluster < 0) throw std::invalid_argument("samples_per_cluster must be >= 0");
  std::vector<Poi> pois;
  std::unordered_set<CellIndex> taken;
  const CounterRng base(seed);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const FrontierCluster& members = clusters[c];
    if (members.empty()) continue;
    Vec3 centroid = Vec3::Zero();
    for (const FrontierCell& m : members) centroid += m.position;
    centroid /= static_cast<double>(members.size());

    std::size_t best = 0;
    double best_d = (members[0].position - centroid).squaredNorm();
    for (std::size_t m = 1; m < members.size(); ++m) {
      const double d = (members[m].position - centroid).squaredNorm();
      if (d < best_d || (d == best_d && members[m].index < members[best].index)) {
        best = m;
        best_d = d;
      }
    }
    const int id = static_cast<int>(c);
    auto emit = [&](const FrontierCell& cell, PoiSource source) {
      if (map.grid().state(cell.index) != CellState::Free) return;
      if (!taken.insert(cell.index).second) return;
      pois.push_back({cell.position, source, id, cell.index});
    };
    emit(members[best], PoiSource::Centroid);

    if (samples_per_cluster > 0 &&
        static_cast<int>(members.size()) >= std::max(1, min_cluster_for_sampling)) {
      std::vector<std::size_t> pool;
      pool.reserve(members.size() - 1);
      for (std::size_t m = 0; m < members.size(); ++m)
        if (m != best) pool.push_back(m);
      CounterRng rng = base.split(c);
      const std::size_t draws = std::min(pool.size(), static_cast<std::size_t>(samples_per_cluster));
      for (std::size_t d = 0; d < draws; ++d) {
        const std::size_t pick = d + static_cast<std::size_t>(rng.below(pool.size() - d));
        std::swap(pool[d], pool[pick]);
        emit(members[pool[d]], PoiSource::Sample);
      }
    }
  }
  return pois;
}

}  // namespace hetex
