#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hetex/types.hpp"

namespace hetex {

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

const char* to_string(CellState s);

// Dense uniform grid. Linear indices follow lexicographic (i, j, k) order, so
// comparing linear indices is the same as comparing cell coordinates.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const Vec3& origin, double resolution, const Index3& dims,
            CellState fill = CellState::Unknown);

  const Vec3& origin() const { return origin_; }
  double resolution() const { return resolution_; }
  const Index3& dims() const { return dims_; }
  std::size_t size() const { return cells_.size(); }
  Aabb bounds() const;

  bool in_bounds(const Index3& c) const {
    return c[0] >= 0 && c[1] >= 0 && c[2] >= 0 && c[0] < dims_[0] && c[1] < dims_[1] &&
           c[2] < dims_[2];
  }
  CellIndex index(const Index3& c) const {
    return (static_cast<CellIndex>(c[0]) * dims_[1] + c[1]) * dims_[2] + c[2];
  }
  Index3 coords(CellIndex idx) const {
    const int k = static_cast<int>(idx % dims_[2]);
    idx /= dims_[2];
    const int j = static_cast<int>(idx % dims_[1]);
    return {static_cast<int>(idx / dims_[1]), j, k};
  }

  // Cell containing p, or nullopt outside the grid.
  std::optional<Index3> world_to_cell(const Vec3& p) const;
  Index3 world_to_cell_unchecked(const Vec3& p) const;
  Vec3 cell_center(const Index3& c) const {
    return origin_ + (Vec3(c[0], c[1], c[2]).array() + 0.5).matrix() * resolution_;
  }
  Vec3 cell_center(CellIndex idx) const { return cell_center(coords(idx)); }

  CellState state(CellIndex idx) const { return cells_[idx]; }
  CellState state(const Index3& c) const { return cells_[index(c)]; }
  void set(CellIndex idx, CellState s) { cells_[idx] = s; }
  void set(const Index3& c, CellState s) { cells_[index(c)] = s; }

  std::size_t count(CellState s) const;
  const std::vector<CellState>& cells() const { return cells_; }

 private:
  Vec3 origin_ = Vec3::Zero();
  double resolution_ = 1.0;
  Index3 dims_{1, 1, 1};
  std::vector<CellState> cells_;
};

// Exact voxel traversal: calls visit(index, coords, t_enter) for every cell the
// segment origin + t * dir, t in [0, max_t), passes through, in order. The
// visitor returns false to stop early. Stops when the ray leaves the grid;
// returns the parameter at which traversal ended (exit, stop, or max_t).
template <class Visitor>
double traverse_ray(const VoxelGrid& grid, const Vec3& origin, const Vec3& dir, double max_t,
                    Visitor&& visit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Index3 cell = grid.world_to_cell_unchecked(origin);
  if (!grid.in_bounds(cell)) return 0.0;

  const double res = grid.resolution();
  int step[3];
  double t_next[3];
  double t_delta[3];
  for (int a = 0; a < 3; ++a) {
    const double lo = grid.origin()[a] + cell[a] * res;
    if (dir[a] > 0.0) {
      step[a] = 1;
      t_next[a] = (lo + res - origin[a]) / dir[a];
      t_delta[a] = res / dir[a];
    } else if (dir[a] < 0.0) {
      step[a] = -1;
      t_next[a] = (lo - origin[a]) / dir[a];
      t_delta[a] = -res / dir[a];
    } else {
      step[a] = 0;
      t_next[a] = kInf;
      t_delta[a] = kInf;
    }
  }

  double t_enter = 0.0;
  while (true) {
    if (!visit(grid.index(cell), static_cast<const Index3&>(cell), t_enter)) return t_enter;
    int axis = 0;
    if (t_next[1] < t_next[axis]) axis = 1;
    if (t_next[2] < t_next[axis]) axis = 2;
    const double t = t_next[axis];
    if (t >= max_t) return max_t;
    cell[axis] += step[axis];
    if (!grid.in_bounds(cell)) return t;
    t_enter = t;
    t_next[axis] += t_delta[axis];
  }
}

}  // namespace hetex
