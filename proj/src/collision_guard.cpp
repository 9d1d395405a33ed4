#include "hetex/collision_guard.hpp"

#include <cmath>
#include <stdexcept>

namespace hetex {

const char* to_string(SafetyZone z) {
  switch (z) {
    case SafetyZone::Critical: return "critical";
    case SafetyZone::Caution: return "caution";
    case SafetyZone::Safe: return "safe";
  }
  return "?";
}

const char* to_string(SafetyEventKind k) {
  switch (k) {
    case SafetyEventKind::Zone: return "zone";
    case SafetyEventKind::Halt: return "halt";
    case SafetyEventKind::Resume: return "resume";
    case SafetyEventKind::Escape: return "escape";
    case SafetyEventKind::Stall: return "stall";
    case SafetyEventKind::Requeue: return "requeue";
  }
  return "?";
}

SafetyZone classify(const Vec3& x_p, const Vec3& x_s, double d_c, double d_s) {
  if (!(0.0 < d_c && d_c < d_s)) throw std::invalid_argument("need 0 < d_c < d_s");
  const double d = (x_p - x_s).norm();
  if (d < d_c) return SafetyZone::Critical;
  if (d < d_s) return SafetyZone::Caution;
  return SafetyZone::Safe;
}

EscapeGoal escape_goal(const Vec3& x_p, const Vec3& x_s, double phi_s) {
  EscapeGoal out;
  out.heading = phi_s;
  const Vec3 away = x_s - x_p;
  const double n = away.norm();
  if (n > 0.0) {
    const Vec3 u = away / n;
    out.goal = x_s + u;
    out.goal.z() = x_s.z();
    if (u.x() != 0.0 || u.y() != 0.0) return out;
  }
  out.degenerate = true;
  out.goal = x_s + Vec3(std::cos(phi_s), std::sin(phi_s), 0.0);
  out.goal.z() = x_s.z();
  return out;
}

void CollisionGuard::dispatch_escape(UavPair& uavs, const DistanceField& field, double distance,
                                     TickResult& out) {
  UavState& p = uavs[index_of(UavId::Primary)];
  UavState& s = uavs[index_of(UavId::Secondary)];
  const EscapeGoal eg = escape_goal(p.position, s.position, s.heading);
  s.active_path.clear();
  s.hold_heading = eg.heading;
  ++interventions_;
  auto path = grid_astar(field, s.position, eg.goal, s.radius, params_.relax_radius);
  if (!path) {
    out.events.push_back({SafetyEventKind::Stall, UavId::Secondary, out.zone, s.position, distance,
                          "no escape path"});
    return;
  }
  s.active_path.assign(path->waypoints.begin(), path->waypoints.end());
  out.events.push_back({SafetyEventKind::Escape, UavId::Secondary, out.zone, eg.goal, distance,
                        eg.degenerate ? "degenerate" : ""});
}

CollisionGuard::TickResult CollisionGuard::tick(UavPair& uavs, const DistanceField& field) {
  UavState& p = uavs[index_of(UavId::Primary)];
  UavState& s = uavs[index_of(UavId::Secondary)];
  TickResult out;
  out.distance = (p.position - s.position).norm();
  out.zone = classify(p.position, s.position, params_.d_c, params_.d_s);
  if (out.zone != last_zone_) {
    out.events.push_back({SafetyEventKind::Zone, UavId::Primary, out.zone, p.position,
                          out.distance,
                          std::string(to_string(last_zone_)) + "->" + to_string(out.zone)});
    last_zone_ = out.zone;
  }

  auto halt = [&] {
    if (p.halted) return;
    p.halted = true;
    out.events.push_back(
        {SafetyEventKind::Halt, UavId::Primary, out.zone, p.position, out.distance, ""});
  };

  switch (out.zone) {
    case SafetyZone::Critical:
      halt();
      if (!escaping_) {
        // Preempt the exploration goal; the planner assigns a new one on release.
        escaping_ = true;
        s.goal.reset();
        s.guard_controlled = true;
        dispatch_escape(uavs, field, out.distance, out);
      } else if (!s.has_path()) {
        dispatch_escape(uavs, field, out.distance, out);
      }
      break;
    case SafetyZone::Caution:
      halt();
      if (escaping_ && !s.has_path()) dispatch_escape(uavs, field, out.distance, out);
      break;
    case SafetyZone::Safe:
      if (escaping_) {
        escaping_ = false;
        s.guard_controlled = false;
        s.active_path.clear();
        s.hold_heading.reset();
        out.events.push_back(
            {SafetyEventKind::Requeue, UavId::Secondary, out.zone, s.position, out.distance, ""});
      }
      if (p.halted) {
        p.halted = false;
        out.events.push_back(
            {SafetyEventKind::Resume, UavId::Primary, out.zone, p.position, out.distance, ""});
      }
      break;
  }
  return out;
}

}  // namespace hetex
