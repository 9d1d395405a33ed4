// hetex command line: run, compare and validate missions.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hetex/config.hpp"
#include "hetex/scenario.hpp"
#include "hetex/simulation.hpp"

namespace {

enum ExitCode { kOk = 0, kIncomplete = 1, kSchema = 2, kSafety = 3 };

struct CommonOptions {
  std::string scenario;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> allocator;
  std::optional<double> t_max;
  bool wall_time = false;
};

// Precedence: defaults < config file < HETEX_SEED < command line flags.
hetex::MissionConfig resolve_config(const CommonOptions& o) {
  hetex::MissionConfig cfg;
  if (!o.config.empty()) cfg = hetex::load_config_file(o.config, cfg);
  if (const char* env = std::getenv("HETEX_SEED"); env && *env)
    hetex::apply_config_value(cfg, "seed", env);
  if (o.seed) cfg.seed = *o.seed;
  if (o.allocator) hetex::apply_config_value(cfg, "allocator", *o.allocator);
  if (o.t_max) cfg.t_max = *o.t_max;
  if (o.wall_time) cfg.record_wall_time = true;
  cfg.validate();
  return cfg;
}

int exit_code(const hetex::MissionSummary& s) {
  if (!s.safety_ok()) return kSafety;
  if (!s.complete) return kIncomplete;
  return kOk;
}

void print_summary(const hetex::MissionSummary& s) {
  std::cout << s.strategy << " seed " << s.seed << ": fraction " << s.final_fraction << " at t "
            << s.sim_time << " s";
  if (s.t_95) std::cout << ", t_95 " << *s.t_95 << " s";
  std::cout << ", interventions " << s.interventions;
  if (s.collision_fault) std::cout << ", COLLISION FAULT: " << s.fault;
  std::cout << '\n';
}

hetex::MetricsRecord run_one(const hetex::Scenario& sc, const hetex::MissionConfig& cfg,
                             const std::string& map_dump) {
  hetex::Simulation sim(sc, cfg);
  sim.run();
  if (!map_dump.empty()) {
    const auto parent = std::filesystem::path(map_dump).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    hetex::write_map_file(map_dump, sim.map());
  }
  return sim.finish();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous two-UAV exploration simulator"};
  app.require_subcommand(1);

  CommonOptions run_opt;
  std::string run_out = "out";
  std::string map_dump;
  auto* run = app.add_subcommand("run", "Run one mission");
  run->add_option("--scenario", run_opt.scenario, "Scenario JSON file")->required();
  run->add_option("--config", run_opt.config, "key=value config file");
  run->add_option("--allocator", run_opt.allocator, "greedy or mcf");
  run->add_option("--seed", run_opt.seed, "Seed (overrides HETEX_SEED and the config file)");
  run->add_option("--t-max", run_opt.t_max, "Mission time limit in seconds");
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--dump-map", map_dump, "Write the final explored map to this file");
  run->add_flag("--wall-time", run_opt.wall_time, "Record wall-clock tick durations");

  CommonOptions cmp_opt;
  std::string cmp_out = "compare";
  int seeds = 5;
  std::uint64_t first_seed = 1;
  auto* cmp = app.add_subcommand("compare", "Run greedy and MCF allocation over several seeds");
  cmp->add_option("--scenario", cmp_opt.scenario, "Scenario JSON file")->required();
  cmp->add_option("--config", cmp_opt.config, "key=value config file");
  cmp->add_option("--seeds", seeds, "Number of seeds")->check(CLI::PositiveNumber);
  cmp->add_option("--first-seed", first_seed, "First seed");
  cmp->add_option("--t-max", cmp_opt.t_max, "Mission time limit in seconds");
  cmp->add_option("--out", cmp_out, "Output directory");
  cmp->add_flag("--wall-time", cmp_opt.wall_time, "Record wall-clock tick durations");

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Check a scenario file against the schema");
  val->add_option("--scenario", validate_path, "Scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*val) {
      const hetex::Scenario sc = hetex::load_scenario_file(validate_path);
      std::cout << "ok: " << sc.name << '\n';
      return kOk;
    }

    if (*run) {
      const hetex::Scenario sc = hetex::load_scenario_file(run_opt.scenario);
      const hetex::MissionConfig cfg = resolve_config(run_opt);
      const auto rec = run_one(sc, cfg, map_dump);
      hetex::write_outputs(rec, run_out);
      print_summary(rec.summary);
      return exit_code(rec.summary);
    }

    // compare
    const hetex::Scenario sc = hetex::load_scenario_file(cmp_opt.scenario);
    const hetex::MissionConfig base = resolve_config(cmp_opt);
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    std::vector<double> t_greedy, t_mcf;
    int code = kOk;
    for (int i = 0; i < seeds; ++i) {
      const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
      nlohmann::ordered_json row{{"seed", seed}};
      for (const auto strategy : {hetex::Strategy::Greedy, hetex::Strategy::Mcf}) {
        hetex::MissionConfig cfg = base;
        cfg.seed = seed;
        cfg.strategy = strategy;
        const auto rec = run_one(sc, cfg, {});
        const std::string name = hetex::to_string(strategy);
        hetex::write_outputs(rec, (std::filesystem::path(cmp_out) /
                                   (name + "_seed" + std::to_string(seed))).string());
        print_summary(rec.summary);
        const auto& s = rec.summary;
        row[name] = s.t_95 ? nlohmann::ordered_json(*s.t_95) : nlohmann::ordered_json(nullptr);
        if (s.t_95) (strategy == hetex::Strategy::Greedy ? t_greedy : t_mcf).push_back(*s.t_95);
        code = std::max(code, exit_code(s));
      }
      pairs.push_back(row);
    }
    nlohmann::ordered_json out{{"pairs", pairs}};
    out["median_t95_greedy"] = t_greedy.empty() ? nlohmann::ordered_json(nullptr)
                                                : nlohmann::ordered_json(median(t_greedy));
    out["median_t95_mcf"] =
        t_mcf.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(median(t_mcf));
    std::filesystem::create_directories(cmp_out);
    std::ofstream(std::filesystem::path(cmp_out) / "compare.json") << out.dump(2) << '\n';
    std::cout << out.dump(2) << '\n';
    return code;
  } catch (const hetex::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kSchema;
  } catch (const hetex::CollisionFault& e) {
    std::cerr << "collision fault: " << e.what() << '\n';
    return kSafety;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIncomplete;
  }
}
