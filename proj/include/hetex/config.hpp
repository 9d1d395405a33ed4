#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hetex/allocator.hpp"

namespace hetex {

// Mission parameters. Defaults follow the office simulation setup; anything
// marked optional falls back to the scenario file when unset.
struct MissionConfig {
  double dt = 0.05;       // s
  double f_front = 0.5;   // Hz, frontier detection + sphere map rebuild
  double f_path = 2.0;    // Hz, monitoring / planning
  double f_coll = 10.0;   // Hz, collision guard
  double f_sensor = 2.0;  // Hz, scan integration

  double d_c = 2.0;
  double d_s = 2.5;
  double r_sph = 0.35;
  double r_max = 2.0;
  int sphere_stride = 2;
  double goal_snap = 0.6;
  std::optional<double> resolution;  // overrides the scenario grid resolution
  std::optional<double> s_p;         // overrides the scenario pUAV radius
  std::optional<double> s_s;         // overrides the scenario sUAV radius

  Strategy strategy = Strategy::Mcf;
  double alpha = 1.0;
  double beta = 0.5;
  int arc_budget = 5;
  std::int64_t self_cost = 1'000'000;  // milliunits
  double safety_weight = 0.2;

  std::optional<double> eps;  // cluster link distance; 3 x resolution when unset
  int samples_per_cluster = 3;
  int min_cluster_for_sampling = 25;

  double goal_tolerance = 0.3;
  double relax_radius = 1.0;

  std::uint64_t seed = 1;
  double completion_target = 0.95;
  double t_max = 600.0;
  bool autonomy = true;          // false: no frontier-driven planning (scripted runs)
  bool record_wall_time = false; // wall-clock tick durations in timings.csv

  // Throws std::invalid_argument on inconsistent values.
  void validate() const;
  // Steps between ticks of a module running at `rate`; throws when the rate
  // is not an integer multiple of dt.
  std::uint64_t period_steps(double rate) const;
};

// Applies one key=value assignment; throws SchemaError naming the key.
void apply_config_value(MissionConfig& cfg, std::string_view key, std::string_view value);
// Flat "key = value" lines; '#' starts a comment.
MissionConfig parse_config(std::string_view text, MissionConfig base = {});
MissionConfig load_config_file(const std::string& path, MissionConfig base = {});

}  // namespace hetex
