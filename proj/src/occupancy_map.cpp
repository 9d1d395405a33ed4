#include "hetex/occupancy_map.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hetex {

namespace {

constexpr double kRangeTol = 1e-9;

int first_center_inside(double origin, double res, int n, double lo) {
  int i = std::max(0, static_cast<int>(std::floor((lo - origin) / res - 0.5)) - 1);
  while (i < n && origin + (i + 0.5) * res < lo) ++i;
  return i;
}

int last_center_inside(double origin, double res, int n, double hi) {
  int i = std::min(n - 1, static_cast<int>(std::ceil((hi - origin) / res - 0.5)) + 1);
  while (i >= 0 && origin + (i + 0.5) * res > hi) --i;
  return i;
}

}  // namespace

ExploredMap::ExploredMap(const VoxelGrid& like, const Aabb& explore_bounds)
    : grid_(like.origin(), like.resolution(), like.dims(), CellState::Unknown),
      explore_bounds_(explore_bounds),
      observed_by_(grid_.size(), 0),
      stamp_(grid_.size(), 0) {
  if (explore_bounds.empty()) throw std::invalid_argument("explore_bounds must be nonempty");
  for (int a = 0; a < 3; ++a) {
    lo_[a] = first_center_inside(grid_.origin()[a], grid_.resolution(), grid_.dims()[a],
                                 explore_bounds.min[a]);
    hi_[a] = last_center_inside(grid_.origin()[a], grid_.resolution(), grid_.dims()[a],
                                explore_bounds.max[a]);
  }
  if (explore_cell_count() == 0) throw std::invalid_argument("explore_bounds contains no cell");
}

std::size_t ExploredMap::explore_cell_count() const {
  std::size_t n = 1;
  for (int a = 0; a < 3; ++a) {
    if (hi_[a] < lo_[a]) return 0;
    n *= static_cast<std::size_t>(hi_[a] - lo_[a] + 1);
  }
  return n;
}

void ExploredMap::apply(CellIndex idx, CellState state, std::uint8_t who) {
  const CellState prev = grid_.state(idx);
  if (prev == CellState::Unknown && in_explore_bounds(grid_.coords(idx))) ++known_in_bounds_;
  if (prev != CellState::Occupied) grid_.set(idx, state);
  observed_by_[idx] |= who;
}

void ExploredMap::mark(CellIndex idx, CellState state, UavId who) {
  if (state == CellState::Unknown) throw std::invalid_argument("cannot mark a cell Unknown");
  apply(idx, state, observer_bit(who));
  ++version_;
}

void ExploredMap::integrate_scan(const Scan& scan, UavId who) {
  if (!grid_.world_to_cell(scan.origin))
    throw std::domain_error("scan origin outside the map bounds");
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  std::vector<CellIndex> free_cells;
  std::vector<CellIndex> occupied_cells;
  std::vector<CellIndex> at_hit;
  for (const RayHit& hit : scan.hits) {
    const bool obstacle = hit.terminated_by == Termination::Obstacle;
    const double limit = obstacle ? hit.range + kRangeTol : hit.range;
    at_hit.clear();
    traverse_ray(grid_, scan.origin, hit.direction, limit,
                 [&](CellIndex idx, const Index3&, double t_enter) {
                   if (obstacle && t_enter >= hit.range - kRangeTol) {
                     at_hit.push_back(idx);
                     return true;
                   }
                   free_cells.push_back(idx);
                   return true;
                 });
    // A return through a cell edge or corner does not say which of the cells
    // entered there is the obstacle; those cells are left untouched.
    if (at_hit.size() == 1) occupied_cells.push_back(at_hit.front());
  }
  // Occupied wins over Free inside one integration.
  for (CellIndex idx : occupied_cells) stamp_[idx] = epoch_;
  const std::uint8_t bit = observer_bit(who);
  for (CellIndex idx : free_cells)
    if (stamp_[idx] != epoch_) apply(idx, CellState::Free, bit);
  for (CellIndex idx : occupied_cells) apply(idx, CellState::Occupied, bit);
  ++version_;
}

double ExploredMap::explored_fraction() const {
  const std::size_t total = explore_cell_count();
  return total == 0 ? 0.0 : static_cast<double>(known_in_bounds_) / static_cast<double>(total);
}

CellState ExploredMap::state_at(const Vec3& p) const {
  const auto c = grid_.world_to_cell(p);
  if (!c) throw std::domain_error("state_at query outside the map bounds");
  return grid_.state(*c);
}

namespace {

constexpr char kMagic[8] = {'H', 'X', 'M', 'A', 'P', '0', '0', '1'};

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little, "map dump assumes little-endian");
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated map dump");
  return v;
}

}  // namespace

void write_map(std::ostream& out, const ExploredMap& map) {
  const VoxelGrid& g = map.grid();
  out.write(kMagic, sizeof(kMagic));
  for (int a = 0; a < 3; ++a) put<std::int32_t>(out, g.dims()[a]);
  put<double>(out, g.resolution());
  for (int a = 0; a < 3; ++a) put<double>(out, g.origin()[a]);
  out.write(reinterpret_cast<const char*>(g.cells().data()),
            static_cast<std::streamsize>(g.cells().size()));
  out.write(reinterpret_cast<const char*>(map.observed_by().data()),
            static_cast<std::streamsize>(map.observed_by().size()));
}

void write_map_file(const std::string& path, const ExploredMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write map dump: " + path);
  write_map(out, map);
}

MapDump read_map(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a map dump");
  Index3 dims;
  for (int a = 0; a < 3; ++a) dims[a] = get<std::int32_t>(in);
  const double res = get<double>(in);
  Vec3 origin;
  for (int a = 0; a < 3; ++a) origin[a] = get<double>(in);
  MapDump dump{VoxelGrid(origin, res, dims), {}};
  std::vector<std::uint8_t> raw(dump.grid.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] > 2) throw std::runtime_error("bad cell state in map dump");
    dump.grid.set(i, static_cast<CellState>(raw[i]));
  }
  dump.observed_by.resize(raw.size());
  in.read(reinterpret_cast<char*>(dump.observed_by.data()),
          static_cast<std::streamsize>(raw.size()));
  if (!in) throw std::runtime_error("truncated map dump");
  return dump;
}

}  // namespace hetex
