#include "hetex/distance_field.hpp"

#include <cmath>
#include <limits>

namespace hetex {

void distance_transform_1d(const double* f, double* out, int n, std::vector<int>& v,
                           std::vector<double>& z) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  v.resize(n);
  z.resize(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;  // z[0] is -inf, so this never underflows
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
}

DistanceField::DistanceField(const VoxelGrid& grid, bool unknown_is_obstacle)
    : geometry_(grid.origin(), grid.resolution(), grid.dims()) {
  // Squared distances are kept in cell units; a large finite sentinel keeps
  // the parabola intersections well defined.
  constexpr double kFar = 1e12;
  const Index3 d = grid.dims();
  std::vector<double> sq(grid.size());
  for (CellIndex i = 0; i < grid.size(); ++i) {
    const CellState s = grid.state(i);
    const bool obstacle =
        s == CellState::Occupied || (unknown_is_obstacle && s == CellState::Unknown);
    sq[i] = obstacle ? 0.0 : kFar;
  }

  const int longest = std::max({d[0], d[1], d[2]});
  std::vector<double> line(longest), out(longest);
  std::vector<int> v;
  std::vector<double> z;
  auto pass = [&](int axis) {
    const int a1 = (axis + 1) % 3;
    const int a2 = (axis + 2) % 3;
    Index3 c{};
    for (c[a1] = 0; c[a1] < d[a1]; ++c[a1]) {
      for (c[a2] = 0; c[a2] < d[a2]; ++c[a2]) {
        for (c[axis] = 0; c[axis] < d[axis]; ++c[axis]) line[c[axis]] = sq[grid.index(c)];
        distance_transform_1d(line.data(), out.data(), d[axis], v, z);
        for (c[axis] = 0; c[axis] < d[axis]; ++c[axis]) sq[grid.index(c)] = out[c[axis]];
      }
    }
  };
  pass(2);
  pass(1);
  pass(0);

  dist_.resize(grid.size());
  for (CellIndex i = 0; i < grid.size(); ++i)
    dist_[i] = sq[i] >= kFar ? kNoObstacle : std::sqrt(sq[i]) * grid.resolution();
}

double DistanceField::clearance_lower_bound(const Vec3& p) const {
  const auto c = geometry_.world_to_cell(p);
  if (!c) return -std::numeric_limits<double>::infinity();
  return at(*c) - (geometry_.cell_center(*c) - p).norm();
}

}  // namespace hetex
