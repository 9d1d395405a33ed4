#pragma once

#include <string_view>
#include <vector>

#include "hetex/types.hpp"
#include "hetex/voxel_grid.hpp"

namespace hetex {

enum class SensorKind : std::uint8_t { Omni3D, Cone };

// Ray lattice sensor. Omni3D covers the full horizon and ignores heading;
// Cone is centred on the platform heading.
struct SensorModel {
  SensorKind kind = SensorKind::Omni3D;
  double h_fov = 2.0 * M_PI;  // rad
  double v_fov = M_PI / 2.0;  // rad
  double max_range = 40.0;    // m
  int n_azimuth = 360;
  int n_elevation = 46;

  static SensorModel omni(double v_fov, double max_range, int n_azimuth, int n_elevation);
  static SensorModel cone(double h_fov, double v_fov, double max_range, int n_azimuth,
                          int n_elevation);

  // Throws std::invalid_argument when the model is inconsistent.
  void validate() const;
  std::size_t ray_count() const { return static_cast<std::size_t>(n_azimuth) * n_elevation; }
  // Unit directions in azimuth-major order.
  std::vector<Vec3> ray_directions(double heading) const;
};

enum class Termination : std::uint8_t { Obstacle, MaxRange };

struct RayResult {
  double range = 0.0;
  Termination terminated_by = Termination::MaxRange;
};

struct RayHit {
  Vec3 direction;
  double range = 0.0;
  Termination terminated_by = Termination::MaxRange;
};

struct Scan {
  Vec3 origin = Vec3::Zero();
  double heading = 0.0;
  std::vector<RayHit> hits;
};

// Every cell whose centre lies inside one of `boxes` is Occupied, the rest Free.
// Throws BoundsError if a box is not contained in `bounds`.
VoxelGrid rasterize_world(const Aabb& bounds, double resolution, const std::vector<Aabb>& boxes);

// Parses a scenario document (JSON) and rasterizes its ground truth.
VoxelGrid load_world(std::string_view scenario_doc);

// Distance along dir to the first Occupied cell (entry face), or MaxRange when
// nothing is hit before max_range or the ray leaves the grid.
RayResult cast_ray(const VoxelGrid& grid, const Vec3& origin, const Vec3& dir, double max_range);

Scan sample_scan(const VoxelGrid& grid, const SensorModel& sensor, const Vec3& position,
                 double heading);

}  // namespace hetex
