#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hetex/occupancy_map.hpp"
#include "hetex/types.hpp"

namespace hetex {

struct FrontierCell {
  CellIndex index = 0;
  Vec3 position = Vec3::Zero();
};

using FrontierCluster = std::vector<FrontierCell>;

enum class PoiSource : std::uint8_t { Centroid, Sample };

struct Poi {
  Vec3 position = Vec3::Zero();
  PoiSource source = PoiSource::Centroid;
  int cluster_id = 0;
  CellIndex cell = 0;
};

struct FrontierParams {
  double eps = 0.6;  // m, clustering link distance
  int samples_per_cluster = 3;
  int min_cluster_for_sampling = 25;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// Free cells inside explore_bounds with at least one face neighbour that is
// Unknown and also inside explore_bounds. Sorted by cell index.
std::vector<FrontierCell> detect_frontiers(const ExploredMap& map);

// Single-linkage components under ||a - b|| <= eps. Members are sorted by cell
// index and clusters by their smallest member index.
std::vector<FrontierCluster> cluster_frontiers(std::span<const FrontierCell> cells, double eps);

// One centroid POI per cluster (snapped to the nearest member, ties to the
// lower cell index) plus, for clusters with at least min_cluster_for_sampling
// members, up to samples_per_cluster distinct other members drawn with a
// generator seeded by (seed, cluster id).
std::vector<Poi> generate_pois(const std::vector<FrontierCluster>& clusters,
                               const ExploredMap& map, int samples_per_cluster,
                               int min_cluster_for_sampling, std::uint64_t seed);

}  // namespace hetex
