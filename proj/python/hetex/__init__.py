"""Two-UAV heterogeneous exploration: simulation core and allocation primitives."""

from ._hetex import (
    MetricsRecord,
    MissionConfig,
    SafetyZone,
    Scenario,
    SchemaError,
    Simulation,
    Strategy,
    classify,
    detect_frontiers,
    distance_field,
    escape_goal,
    greedy_cost_p,
    greedy_cost_s,
    load_config,
    load_scenario,
    parse_config,
    parse_scenario,
    run_mission,
    solve_assignment,
    wrap_angle,
)

__all__ = [
    "MetricsRecord",
    "MissionConfig",
    "SafetyZone",
    "Scenario",
    "SchemaError",
    "Simulation",
    "Strategy",
    "classify",
    "detect_frontiers",
    "distance_field",
    "escape_goal",
    "greedy_cost_p",
    "greedy_cost_s",
    "load_config",
    "load_scenario",
    "parse_config",
    "parse_scenario",
    "run_mission",
    "solve_assignment",
    "wrap_angle",
]
