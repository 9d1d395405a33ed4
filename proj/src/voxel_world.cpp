#include "hetex/voxel_world.hpp"

#include <cmath>
#include <stdexcept>

#include "hetex/scenario.hpp"

namespace hetex {

SensorModel SensorModel::omni(double v_fov, double max_range, int n_azimuth, int n_elevation) {
  SensorModel s{SensorKind::Omni3D, 2.0 * M_PI, v_fov, max_range, n_azimuth, n_elevation};
  s.validate();
  return s;
}

SensorModel SensorModel::cone(double h_fov, double v_fov, double max_range, int n_azimuth,
                              int n_elevation) {
  SensorModel s{SensorKind::Cone, h_fov, v_fov, max_range, n_azimuth, n_elevation};
  s.validate();
  return s;
}

void SensorModel::validate() const {
  if (!(max_range > 0.0)) throw std::invalid_argument("sensor max_range must be positive");
  if (n_azimuth < 1 || n_elevation < 1)
    throw std::invalid_argument("sensor ray counts must be >= 1");
  if (!(v_fov >= 0.0 && v_fov <= M_PI)) throw std::invalid_argument("sensor v_fov out of range");
  if (kind == SensorKind::Omni3D && std::abs(h_fov - 2.0 * M_PI) > 1e-12)
    throw std::invalid_argument("omnidirectional sensor must have a 2*pi horizontal fov");
  if (kind == SensorKind::Cone && !(h_fov > 0.0 && h_fov < M_PI))
    throw std::invalid_argument("cone sensor horizontal fov must be in (0, pi)");
}

namespace {

// Evenly spaced samples spanning [-fov/2, fov/2] with both ends included.
double lattice_angle(double fov, int i, int n) {
  if (n == 1) return 0.0;
  return -0.5 * fov + fov * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

std::vector<Vec3> SensorModel::ray_directions(double heading) const {
  std::vector<Vec3> dirs;
  dirs.reserve(ray_count());
  for (int i = 0; i < n_azimuth; ++i) {
    const double az = kind == SensorKind::Omni3D
                          ? 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n_azimuth)
                          : heading + lattice_angle(h_fov, i, n_azimuth);
    for (int j = 0; j < n_elevation; ++j) {
      const double el = lattice_angle(v_fov, j, n_elevation);
      dirs.emplace_back(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    }
  }
  return dirs;
}

VoxelGrid rasterize_world(const Aabb& bounds, double resolution, const std::vector<Aabb>& boxes) {
  const Vec3 extent = (bounds.max - bounds.min) / resolution;
  const Index3 dims{static_cast<int>(std::lround(extent.x())),
                    static_cast<int>(std::lround(extent.y())),
                    static_cast<int>(std::lround(extent.z()))};
  VoxelGrid grid(bounds.min, resolution, dims, CellState::Free);
  constexpr double kTol = 1e-9;
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    const Aabb& box = boxes[b];
    if ((box.min.array() < bounds.min.array() - kTol).any() ||
        (box.max.array() > bounds.max.array() + kTol).any())
      throw BoundsError("box " + std::to_string(b) + " lies outside the world bounds");
    Index3 lo, hi;
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max(0, static_cast<int>(std::floor((box.min[a] - bounds.min[a]) / resolution - 0.5)));
      hi[a] = std::min(dims[a] - 1,
                       static_cast<int>(std::ceil((box.max[a] - bounds.min[a]) / resolution - 0.5)));
    }
    for (int i = lo[0]; i <= hi[0]; ++i)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int k = lo[2]; k <= hi[2]; ++k)
          if (box.contains(grid.cell_center(Index3{i, j, k})))
            grid.set(Index3{i, j, k}, CellState::Occupied);
  }
  return grid;
}

VoxelGrid load_world(std::string_view scenario_doc) {
  const Scenario sc = parse_scenario(scenario_doc);
  return rasterize_world(sc.bounds, sc.resolution, sc.boxes);
}

RayResult cast_ray(const VoxelGrid& grid, const Vec3& origin, const Vec3& dir, double max_range) {
  if (!grid.world_to_cell(origin)) throw std::domain_error("cast_ray origin outside the grid");
  RayResult out{max_range, Termination::MaxRange};
  bool hit = false;
  const double end = traverse_ray(grid, origin, dir, max_range,
                                  [&](CellIndex idx, const Index3&, double t_enter) {
                                    if (grid.state(idx) == CellState::Occupied) {
                                      out.range = t_enter;
                                      hit = true;
                                      return false;
                                    }
                                    return true;
                                  });
  if (hit) {
    out.terminated_by = Termination::Obstacle;
  } else {
    out.range = std::min(end, max_range);
  }
  return out;
}

Scan sample_scan(const VoxelGrid& grid, const SensorModel& sensor, const Vec3& position,
                 double heading) {
  const auto cell = grid.world_to_cell(position);
  if (!cell) throw std::domain_error("sensor pose outside the grid");
  if (grid.state(*cell) == CellState::Occupied)
    throw std::domain_error("sensor pose inside an occupied cell");
  Scan scan;
  scan.origin = position;
  scan.heading = heading;
  const auto dirs = sensor.ray_directions(heading);
  scan.hits.reserve(dirs.size());
  for (const Vec3& d : dirs) {
    const RayResult r = cast_ray(grid, position, d, sensor.max_range);
    scan.hits.push_back({d, r.range, r.terminated_by});
  }
  return scan;
}

}  // namespace hetex
