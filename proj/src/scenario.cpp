#include "hetex/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hetex {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
  return d;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<int>();
}

Vec3 as_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw SchemaError(path, "expected an array of 3 numbers");
  return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"),
          as_number(v[2], path + "[2]")};
}

Aabb as_box(const json& v, const std::string& path) {
  Aabb b{as_vec3(require(v, "min", path), path + ".min"),
         as_vec3(require(v, "max", path), path + ".max")};
  if ((b.max.array() < b.min.array()).any()) throw SchemaError(path, "max is below min");
  return b;
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, path + "." + key);
}

SensorModel parse_sensor(const json& v, const std::string& path) {
  const json& kind = require(v, "kind", path);
  if (!kind.is_string()) throw SchemaError(path + ".kind", "expected a string");
  SensorModel s;
  const std::string k = kind.get<std::string>();
  if (k == "omni") {
    s.kind = SensorKind::Omni3D;
  } else if (k == "cone") {
    s.kind = SensorKind::Cone;
  } else {
    throw SchemaError(path + ".kind", "expected \"omni\" or \"cone\"");
  }
  constexpr double kDeg = M_PI / 180.0;
  s.h_fov = as_number(require(v, "h_fov_deg", path), path + ".h_fov_deg") * kDeg;
  if (s.kind == SensorKind::Omni3D && std::abs(s.h_fov - 2.0 * M_PI) < 1e-9) s.h_fov = 2.0 * M_PI;
  s.v_fov = as_number(require(v, "v_fov_deg", path), path + ".v_fov_deg") * kDeg;
  s.max_range = as_number(require(v, "max_range", path), path + ".max_range");
  s.n_azimuth = as_int(require(v, "n_azimuth", path), path + ".n_azimuth");
  s.n_elevation = as_int(require(v, "n_elevation", path), path + ".n_elevation");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view doc) {
  json root;
  try {
    root = json::parse(doc);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("$", "expected an object");

  Scenario sc;
  if (auto it = root.find("name"); it != root.end()) {
    if (!it->is_string()) throw SchemaError("name", "expected a string");
    sc.name = it->get<std::string>();
  }
  sc.bounds = as_box(require(root, "bounds", "$"), "bounds");
  if (sc.bounds.empty()) throw SchemaError("bounds", "bounds must have positive extent");
  sc.resolution = as_number(require(root, "resolution", "$"), "resolution");
  if (!(sc.resolution > 0.0)) throw SchemaError("resolution", "must be positive");
  const Vec3 cells = (sc.bounds.max - sc.bounds.min) / sc.resolution;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(cells[a] - std::round(cells[a])) > 1e-6)
      throw SchemaError("bounds", "extent is not a multiple of the resolution");
  }

  const json& boxes = require(root, "boxes", "$");
  if (!boxes.is_array()) throw SchemaError("boxes", "expected an array");
  for (std::size_t i = 0; i < boxes.size(); ++i)
    sc.boxes.push_back(as_box(boxes[i], "boxes[" + std::to_string(i) + "]"));

  sc.explore_bounds = as_box(require(root, "explore_bounds", "$"), "explore_bounds");
  if (sc.explore_bounds.empty()) throw SchemaError("explore_bounds", "must have positive extent");

  if (auto it = root.find("regions"); it != root.end()) {
    if (!it->is_array()) throw SchemaError("regions", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "regions[" + std::to_string(i) + "]";
      const json& r = (*it)[i];
      Region reg;
      const json& name = require(r, "name", path);
      if (!name.is_string()) throw SchemaError(path + ".name", "expected a string");
      reg.name = name.get<std::string>();
      reg.box = as_box(r, path);
      if (auto g = r.find("gated"); g != r.end()) {
        if (!g->is_boolean()) throw SchemaError(path + ".gated", "expected a boolean");
        reg.gated = g->get<bool>();
      }
      sc.regions.push_back(std::move(reg));
    }
  }

  const json& uavs = require(root, "uavs", "$");
  if (!uavs.is_array() || uavs.size() != kUavCount)
    throw SchemaError("uavs", "expected exactly two entries (pUAV and sUAV)");
  std::array<bool, kUavCount> seen{};
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    const std::string path = "uavs[" + std::to_string(i) + "]";
    const json& u = uavs[i];
    const json& id = require(u, "id", path);
    UavSpec spec;
    if (id == "pUAV") {
      spec.id = UavId::Primary;
    } else if (id == "sUAV") {
      spec.id = UavId::Secondary;
    } else {
      throw SchemaError(path + ".id", "expected \"pUAV\" or \"sUAV\"");
    }
    if (seen[index_of(spec.id)]) throw SchemaError(path + ".id", "duplicate UAV id");
    seen[index_of(spec.id)] = true;
    spec.start = as_vec3(require(u, "start", path), path + ".start");
    if (!sc.bounds.contains(spec.start)) throw SchemaError(path + ".start", "outside bounds");
    spec.heading = number_or(u, "heading", 0.0, path);
    spec.radius = as_number(require(u, "radius", path), path + ".radius");
    if (!(spec.radius > 0.0)) throw SchemaError(path + ".radius", "must be positive");
    spec.speed = number_or(u, "speed", 1.0, path);
    if (!(spec.speed > 0.0)) throw SchemaError(path + ".speed", "must be positive");
    spec.heading_rate = number_or(u, "heading_rate", 1.0, path);
    if (!(spec.heading_rate > 0.0)) throw SchemaError(path + ".heading_rate", "must be positive");
    spec.sensor = parse_sensor(require(u, "sensor", path), path + ".sensor");
    sc.uavs[index_of(spec.id)] = spec;
  }
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace hetex
