#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetex/distance_field.hpp"
#include "hetex/mission_planner.hpp"
#include "hetex/uav.hpp"

namespace hetex {

enum class SafetyZone : std::uint8_t { Critical, Caution, Safe };

const char* to_string(SafetyZone z);

// Half-open bands: [0, d_c) Critical, [d_c, d_s) Caution, [d_s, inf) Safe.
SafetyZone classify(const Vec3& x_p, const Vec3& x_s, double d_c, double d_s);

struct EscapeGoal {
  Vec3 goal = Vec3::Zero();
  double heading = 0.0;
  // True when the unit step away from the pUAV has no horizontal component
  // (coincident or vertically stacked UAVs); the step then follows the sUAV
  // heading instead.
  bool degenerate = false;
};

// One metre step of the sUAV directly away from the pUAV, altitude and
// heading unchanged.
EscapeGoal escape_goal(const Vec3& x_p, const Vec3& x_s, double phi_s);

struct GuardParams {
  double d_c = 2.0;           // critical distance (m)
  double d_s = 2.5;           // safety distance (m)
  double relax_radius = 1.0;  // escape goal relaxation (m)
};

enum class SafetyEventKind : std::uint8_t { Zone, Halt, Resume, Escape, Stall, Requeue };

const char* to_string(SafetyEventKind k);

struct SafetyEvent {
  SafetyEventKind kind = SafetyEventKind::Zone;
  UavId uav = UavId::Primary;
  SafetyZone zone = SafetyZone::Safe;
  Vec3 where = Vec3::Zero();  // escape goal for Escape, UAV position otherwise
  double distance = 0.0;      // inter-UAV distance at the tick
  std::string note;
};

// Three-zone protocol between the pUAV and the sUAV. Critical halts the pUAV
// and sends the sUAV away until the UAVs are back in the Safe band; Caution
// halts the pUAV while the sUAV carries on; Safe releases the pUAV.
class CollisionGuard {
 public:
  explicit CollisionGuard(GuardParams params = {}) : params_(params) {}

  struct TickResult {
    SafetyZone zone = SafetyZone::Safe;
    double distance = 0.0;
    std::vector<SafetyEvent> events;
  };

  TickResult tick(UavPair& uavs, const DistanceField& field);

  bool escaping() const { return escaping_; }
  std::size_t interventions() const { return interventions_; }
  const GuardParams& params() const { return params_; }

 private:
  void dispatch_escape(UavPair& uavs, const DistanceField& field, double distance,
                       TickResult& out);

  GuardParams params_;
  SafetyZone last_zone_ = SafetyZone::Safe;
  bool escaping_ = false;
  std::size_t interventions_ = 0;
};

}  // namespace hetex
