#include "hetex/voxel_grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace hetex {

const char* to_string(CellState s) {
  switch (s) {
    case CellState::Unknown: return "unknown";
    case CellState::Free: return "free";
    case CellState::Occupied: return "occupied";
  }
  return "?";
}

VoxelGrid::VoxelGrid(const Vec3& origin, double resolution, const Index3& dims, CellState fill)
    : origin_(origin), resolution_(resolution), dims_(dims) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1)
    throw std::invalid_argument("grid dims must be >= 1 on every axis");
  cells_.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], fill);
}

Aabb VoxelGrid::bounds() const {
  return {origin_, origin_ + Vec3(dims_[0], dims_[1], dims_[2]) * resolution_};
}

Index3 VoxelGrid::world_to_cell_unchecked(const Vec3& p) const {
  const Vec3 rel = (p - origin_) / resolution_;
  return {static_cast<int>(std::floor(rel.x())), static_cast<int>(std::floor(rel.y())),
          static_cast<int>(std::floor(rel.z()))};
}

std::optional<Index3> VoxelGrid::world_to_cell(const Vec3& p) const {
  if (!p.allFinite()) return std::nullopt;
  const Index3 c = world_to_cell_unchecked(p);
  if (!in_bounds(c)) return std::nullopt;
  return c;
}

std::size_t VoxelGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

}  // namespace hetex
