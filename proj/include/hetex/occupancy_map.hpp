#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hetex/types.hpp"
#include "hetex/voxel_grid.hpp"
#include "hetex/voxel_world.hpp"

namespace hetex {

inline constexpr std::uint8_t observer_bit(UavId id) {
  return static_cast<std::uint8_t>(1u << static_cast<unsigned>(id));
}

// Explored knowledge shared by both UAVs. Cells start Unknown and never return
// to Unknown; an Occupied cell is never downgraded to Free.
class ExploredMap {
 public:
  ExploredMap() = default;
  // Copies the geometry (origin, resolution, dims) of `like`; all cells Unknown.
  ExploredMap(const VoxelGrid& like, const Aabb& explore_bounds);

  const VoxelGrid& grid() const { return grid_; }
  const Aabb& explore_bounds() const { return explore_bounds_; }
  // Inclusive cell range whose centres lie inside explore_bounds.
  const Index3& explore_lo() const { return lo_; }
  const Index3& explore_hi() const { return hi_; }
  bool in_explore_bounds(const Index3& c) const {
    return c[0] >= lo_[0] && c[1] >= lo_[1] && c[2] >= lo_[2] && c[0] <= hi_[0] &&
           c[1] <= hi_[1] && c[2] <= hi_[2];
  }
  std::size_t explore_cell_count() const;

  std::uint8_t observed_by(CellIndex idx) const { return observed_by_[idx]; }
  const std::vector<std::uint8_t>& observed_by() const { return observed_by_; }
  std::uint64_t version() const { return version_; }

  void integrate_scan(const Scan& scan, UavId who);
  // Direct cell write, for building synthetic maps. Obeys the same monotonicity.
  void mark(CellIndex idx, CellState state, UavId who);

  double explored_fraction() const;
  CellState state_at(const Vec3& p) const;

 private:
  void apply(CellIndex idx, CellState state, std::uint8_t who);

  VoxelGrid grid_;
  Aabb explore_bounds_;
  Index3 lo_{0, 0, 0};
  Index3 hi_{-1, -1, -1};
  std::vector<std::uint8_t> observed_by_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::size_t known_in_bounds_ = 0;
  std::uint64_t version_ = 0;
};

inline void integrate_scan(ExploredMap& map, const Scan& scan, UavId who) {
  map.integrate_scan(scan, who);
}
inline double explored_fraction(const ExploredMap& map) { return map.explored_fraction(); }
inline CellState state_at(const ExploredMap& map, const Vec3& p) { return map.state_at(p); }

// Binary map dump, little-endian:
//   char[8]  magic "HXMAP001"
//   int32[3] dims (i, j, k)
//   f64      resolution
//   f64[3]   origin
//   u8[n]    cell states (0 unknown, 1 free, 2 occupied), lexicographic (i, j, k)
//   u8[n]    observed_by bitmask (bit 0 pUAV, bit 1 sUAV)
void write_map(std::ostream& out, const ExploredMap& map);
void write_map_file(const std::string& path, const ExploredMap& map);

struct MapDump {
  VoxelGrid grid;
  std::vector<std::uint8_t> observed_by;
};
MapDump read_map(std::istream& in);

}  // namespace hetex
