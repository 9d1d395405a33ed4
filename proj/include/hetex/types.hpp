#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hetex {

using Vec3 = Eigen::Vector3d;
using Index3 = std::array<int, 3>;
using CellIndex = std::size_t;

// Axis-aligned box, closed on both ends.
struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  bool empty() const { return (max.array() <= min.array()).any(); }
};

enum class UavId : std::uint8_t { Primary = 0, Secondary = 1 };

inline constexpr std::size_t kUavCount = 2;

inline std::size_t index_of(UavId id) { return static_cast<std::size_t>(id); }
inline const char* to_string(UavId id) { return id == UavId::Primary ? "pUAV" : "sUAV"; }

// Lexicographic ordering on positions, used wherever ties need a stable break.
inline bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : std::runtime_error("schema error at '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Raised when a UAV would enter an Occupied ground-truth cell.
class CollisionFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetex
