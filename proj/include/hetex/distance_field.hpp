#pragma once

#include <vector>

#include "hetex/voxel_grid.hpp"

namespace hetex {

// Exact Euclidean distance (m) from every cell centre to the nearest obstacle
// cell centre. Obstacles are Occupied cells, plus Unknown cells when
// requested. Cells with no obstacle anywhere in the grid hold kNoObstacle.
class DistanceField {
 public:
  static constexpr double kNoObstacle = 1e9;

  DistanceField() = default;
  DistanceField(const VoxelGrid& grid, bool unknown_is_obstacle);

  const VoxelGrid& geometry() const { return geometry_; }
  double at(CellIndex idx) const { return dist_[idx]; }
  double at(const Index3& c) const { return dist_[geometry_.index(c)]; }
  // Lower bound on the distance from an arbitrary point to the nearest
  // obstacle centre; negative infinity outside the grid.
  double clearance_lower_bound(const Vec3& p) const;

 private:
  VoxelGrid geometry_;  // geometry only; cell states are not used
  std::vector<double> dist_;
};

// One-dimensional squared distance transform of a sampled function (lower
// envelope of parabolas). Writes the result into `out`; f and out have equal size.
void distance_transform_1d(const double* f, double* out, int n, std::vector<int>& v,
                           std::vector<double>& z);

}  // namespace hetex
