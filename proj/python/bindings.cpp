#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hetex/allocator.hpp"
#include "hetex/collision_guard.hpp"
#include "hetex/config.hpp"
#include "hetex/distance_field.hpp"
#include "hetex/frontier_finder.hpp"
#include "hetex/scenario.hpp"
#include "hetex/simulation.hpp"

namespace py = pybind11;
using namespace hetex;

namespace {

using GridArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

// Cells are 0 Unknown, 1 Free, 2 Occupied, indexed [i, j, k].
VoxelGrid grid_from_array(const GridArray& cells, double resolution) {
  if (cells.ndim() != 3) throw std::invalid_argument("expected a 3-D array");
  const Index3 dims{static_cast<int>(cells.shape(0)), static_cast<int>(cells.shape(1)),
                    static_cast<int>(cells.shape(2))};
  VoxelGrid g(Vec3::Zero(), resolution, dims);
  const std::uint8_t* data = cells.data();
  for (CellIndex i = 0; i < g.size(); ++i) {
    if (data[i] > 2) throw std::invalid_argument("cell values must be 0, 1 or 2");
    g.set(i, static_cast<CellState>(data[i]));
  }
  return g;
}

py::dict summary_dict(const MissionSummary& s) {
  py::dict d;
  d["scenario"] = s.scenario;
  d["strategy"] = s.strategy;
  d["seed"] = s.seed;
  d["complete"] = s.complete;
  d["incomplete"] = s.incomplete;
  d["collision_fault"] = s.collision_fault;
  d["sim_time"] = s.sim_time;
  d["steps"] = s.steps;
  d["final_fraction"] = s.final_fraction;
  d["t_95"] = s.t_95 ? py::cast(*s.t_95) : py::none();
  d["total_pois"] = s.total_pois;
  d["allocations"] = s.allocations;
  d["dispatches"] = s.dispatches;
  d["interventions"] = s.interventions;
  d["min_distance"] = s.min_distance;
  d["safety_floor"] = s.safety_floor;
  d["halt_violations"] = s.halt_violations;
  d["safety_ok"] = s.safety_ok();
  py::list regions;
  for (const RegionReport& r : s.regions) {
    py::dict rd;
    rd["name"] = r.name;
    rd["gated"] = r.gated;
    rd["cells"] = r.cells;
    rd["known"] = r.known;
    rd["secondary_only"] = r.secondary_only;
    rd["primary_seen"] = r.primary_seen;
    regions.append(rd);
  }
  d["regions"] = regions;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hetex, m) {
  m.doc() = "Heterogeneous two-UAV exploration core";

  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

  py::enum_<Strategy>(m, "Strategy")
      .value("Greedy", Strategy::Greedy)
      .value("Mcf", Strategy::Mcf);
  py::enum_<SafetyZone>(m, "SafetyZone")
      .value("Critical", SafetyZone::Critical)
      .value("Caution", SafetyZone::Caution)
      .value("Safe", SafetyZone::Safe);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("resolution", &Scenario::resolution)
      .def_property_readonly("box_count", [](const Scenario& s) { return s.boxes.size(); });
  m.def("load_scenario", &load_scenario_file, py::arg("path"));
  m.def("parse_scenario", [](const std::string& doc) { return parse_scenario(doc); },
        py::arg("text"));

  py::class_<MissionConfig>(m, "MissionConfig")
      .def(py::init<>())
      .def_readwrite("dt", &MissionConfig::dt)
      .def_readwrite("d_c", &MissionConfig::d_c)
      .def_readwrite("d_s", &MissionConfig::d_s)
      .def_readwrite("r_sph", &MissionConfig::r_sph)
      .def_readwrite("strategy", &MissionConfig::strategy)
      .def_readwrite("alpha", &MissionConfig::alpha)
      .def_readwrite("beta", &MissionConfig::beta)
      .def_readwrite("arc_budget", &MissionConfig::arc_budget)
      .def_readwrite("seed", &MissionConfig::seed)
      .def_readwrite("t_max", &MissionConfig::t_max)
      .def_readwrite("completion_target", &MissionConfig::completion_target)
      .def_readwrite("autonomy", &MissionConfig::autonomy)
      .def("set", [](MissionConfig& c, const std::string& key,
                     const std::string& value) { apply_config_value(c, key, value); })
      .def("validate", &MissionConfig::validate);
  m.def("load_config", [](const std::string& path) { return load_config_file(path); },
        py::arg("path"));
  m.def("parse_config", [](const std::string& text) { return parse_config(text); },
        py::arg("text"));

  py::class_<MetricsRecord>(m, "MetricsRecord")
      .def_property_readonly("summary",
                             [](const MetricsRecord& r) { return summary_dict(r.summary); })
      .def_property_readonly("timeline", [](const MetricsRecord& r) {
        std::vector<std::pair<double, double>> out;
        for (const TimelineSample& s : r.timeline) out.push_back({s.t, s.fraction});
        return out;
      })
      .def("write", [](const MetricsRecord& r, const std::string& dir) { write_outputs(r, dir); },
           py::arg("out_dir"));

  m.def("run_mission", &run_mission, py::arg("scenario"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<const Scenario&, const MissionConfig&>(), py::arg("scenario"),
           py::arg("config"))
      .def("step", [](Simulation& s, int n) {
             for (int i = 0; i < n && !s.done(); ++i) s.step();
           }, py::arg("n") = 1)
      .def("run", &Simulation::run, py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("done", &Simulation::done)
      .def_property_readonly("time", &Simulation::time)
      .def_property_readonly("explored_fraction",
                             [](const Simulation& s) { return s.map().explored_fraction(); })
      .def_property_readonly("positions", [](const Simulation& s) {
        return std::make_pair(s.uavs()[0].position, s.uavs()[1].position);
      })
      .def("set_path", [](Simulation& s, int uav, const std::vector<Vec3>& waypoints) {
             s.set_path(uav == 0 ? UavId::Primary : UavId::Secondary, waypoints);
           }, py::arg("uav"), py::arg("waypoints"))
      .def("finish", &Simulation::finish);

  m.def("classify", &classify, py::arg("x_p"), py::arg("x_s"), py::arg("d_c"), py::arg("d_s"));
  m.def("escape_goal", [](const Vec3& x_p, const Vec3& x_s, double phi_s) {
          const EscapeGoal g = escape_goal(x_p, x_s, phi_s);
          return py::make_tuple(g.goal, g.heading, g.degenerate);
        }, py::arg("x_p"), py::arg("x_s"), py::arg("phi_s"));
  m.def("greedy_cost_p", &greedy_cost_p, py::arg("x_p"), py::arg("g"));
  m.def("greedy_cost_s", &greedy_cost_s, py::arg("x_s"), py::arg("phi_s"), py::arg("g"),
        py::arg("alpha"), py::arg("beta"));
  m.def("wrap_angle", &wrap_angle);

  // costs[u][p] is the integer arc cost of UAV u (0 pUAV, 1 sUAV) to POI p, or
  // None when the POI is not accessible. Returns (goal_p, goal_s, total) with
  // None for Stay.
  m.def("solve_assignment",
        [](const std::vector<std::vector<std::optional<std::int64_t>>>& costs,
           std::int64_t self_cost) {
          if (costs.size() != 2) throw std::invalid_argument("expected two cost rows");
          if (costs[0].size() != costs[1].size())
            throw std::invalid_argument("cost rows differ in length");
          std::vector<Poi> pois(costs[0].size());
          FlowNetwork net(2, pois);
          for (std::size_t u = 0; u < 2; ++u) {
            for (std::size_t p = 0; p < costs[u].size(); ++p)
              if (costs[u][p]) net.add_poi_arc(u, p, *costs[u][p]);
            net.add_self_arc(u, self_cost);
          }
          const FlowSolution sol = solve_min_cost_flow(net);
          auto opt = [](const std::optional<std::size_t>& g) {
            return g ? py::cast(*g) : py::none();
          };
          return py::make_tuple(opt(sol.goal[0]), opt(sol.goal[1]), sol.cost);
        },
        py::arg("costs"), py::arg("self_cost") = 1'000'000);

  m.def("distance_field",
        [](const GridArray& cells, double resolution, bool unknown_is_obstacle) {
          const VoxelGrid g = grid_from_array(cells, resolution);
          const DistanceField f(g, unknown_is_obstacle);
          py::array_t<double> out({cells.shape(0), cells.shape(1), cells.shape(2)});
          double* o = out.mutable_data();
          for (CellIndex i = 0; i < g.size(); ++i) o[i] = f.at(i);
          return out;
        },
        py::arg("cells"), py::arg("resolution"), py::arg("unknown_is_obstacle") = true);

  m.def("detect_frontiers",
        [](const GridArray& cells, double resolution) {
          const VoxelGrid g = grid_from_array(cells, resolution);
          ExploredMap map(VoxelGrid(g.origin(), resolution, g.dims()), g.bounds());
          for (CellIndex i = 0; i < g.size(); ++i)
            if (g.state(i) != CellState::Unknown) map.mark(i, g.state(i), UavId::Primary);
          std::vector<CellIndex> out;
          for (const FrontierCell& f : detect_frontiers(map)) out.push_back(f.index);
          return out;
        },
        py::arg("cells"), py::arg("resolution"));
}
