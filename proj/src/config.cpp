#include "hetex/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hetex/types.hpp"

namespace hetex {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string str(v);
    const double d = std::stod(str, &used);
    if (used != str.size() || !std::isfinite(d)) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw SchemaError(std::string(key), "expected a number, got '" + std::string(v) + "'");
  }
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw SchemaError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw SchemaError(std::string(key), "expected a boolean, got '" + std::string(v) + "'");
}

}  // namespace

void MissionConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(0.0 < d_c && d_c < d_s)) fail("need 0 < d_c < d_s");
  if (!(completion_target > 0.0 && completion_target <= 1.0))
    fail("completion_target must be in (0, 1]");
  if (!(r_sph > 0.0) || !(r_max >= r_sph)) fail("need 0 < r_sph <= r_max");
  if (sphere_stride < 1) fail("sphere_stride must be >= 1");
  if (arc_budget < 1) fail("arc_budget must be >= 1");
  if (alpha < 0.0 || beta < 0.0) fail("alpha and beta must be non-negative");
  if (self_cost <= 0) fail("self_cost must be positive");
  if (samples_per_cluster < 0) fail("samples_per_cluster must be >= 0");
  if (eps && !(*eps > 0.0)) fail("eps must be positive");
  if (!(t_max > 0.0)) fail("t_max must be positive");
  if (resolution && !(*resolution > 0.0)) fail("resolution must be positive");
  if (s_p && !(*s_p > 0.0)) fail("s_p must be positive");
  if (s_s && !(*s_s > 0.0)) fail("s_s must be positive");
  for (double f : {f_front, f_path, f_coll, f_sensor}) period_steps(f);
}

std::uint64_t MissionConfig::period_steps(double rate) const {
  if (!(rate > 0.0)) throw std::invalid_argument("module rates must be positive");
  const double steps = 1.0 / (rate * dt);
  const double rounded = std::round(steps);
  if (rounded < 1.0 || std::abs(steps - rounded) > 1e-6)
    throw std::invalid_argument("module period is not an integer multiple of dt");
  return static_cast<std::uint64_t>(rounded);
}

void apply_config_value(MissionConfig& c, std::string_view key, std::string_view value) {
  const auto d = [&] { return to_double(key, value); };
  if (key == "dt") c.dt = d();
  else if (key == "f_front") c.f_front = d();
  else if (key == "f_path") c.f_path = d();
  else if (key == "f_coll") c.f_coll = d();
  else if (key == "f_sensor") c.f_sensor = d();
  else if (key == "d_c") c.d_c = d();
  else if (key == "d_s") c.d_s = d();
  else if (key == "r_sph") c.r_sph = d();
  else if (key == "r_max") c.r_max = d();
  else if (key == "sphere_stride") c.sphere_stride = to_int<int>(key, value);
  else if (key == "goal_snap") c.goal_snap = d();
  else if (key == "resolution") c.resolution = d();
  else if (key == "s_p") c.s_p = d();
  else if (key == "s_s") c.s_s = d();
  else if (key == "allocator") {
    try {
      c.strategy = parse_strategy(std::string(value));
    } catch (const std::invalid_argument&) {
      throw SchemaError("allocator", "expected greedy or mcf");
    }
  }
  else if (key == "alpha") c.alpha = d();
  else if (key == "beta") c.beta = d();
  else if (key == "n_arcs") c.arc_budget = to_int<int>(key, value);
  else if (key == "c_x") c.self_cost = to_int<std::int64_t>(key, value);
  else if (key == "lambda") c.safety_weight = d();
  else if (key == "eps") c.eps = d();
  else if (key == "samples_per_cluster") c.samples_per_cluster = to_int<int>(key, value);
  else if (key == "min_cluster_for_sampling") c.min_cluster_for_sampling = to_int<int>(key, value);
  else if (key == "goal_tolerance") c.goal_tolerance = d();
  else if (key == "rho") c.relax_radius = d();
  else if (key == "seed") c.seed = to_int<std::uint64_t>(key, value);
  else if (key == "completion_target") c.completion_target = d();
  else if (key == "t_max") c.t_max = d();
  else if (key == "autonomy") c.autonomy = to_bool(key, value);
  else if (key == "record_wall_time") c.record_wall_time = to_bool(key, value);
  else throw SchemaError(std::string(key), "unknown config key");
}

MissionConfig parse_config(std::string_view text, MissionConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = line;
    if (auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw SchemaError("line " + std::to_string(lineno), "expected key = value");
    apply_config_value(base, trim(v.substr(0, eq)), trim(v.substr(eq + 1)));
  }
  return base;
}

MissionConfig load_config_file(const std::string& path, MissionConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

}  // namespace hetex
