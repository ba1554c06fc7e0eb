"""Deterministic simulator for ad hoc networks running source routing
with observation-based cooperation enforcement."""

from .config import ConfigError, ScenarioConfig, load_scenario, parse_scenario
from .harness import (Experiment, ExperimentError, ExperimentResult,
                      build_compare_dsr, build_sweep_malicious,
                      build_sweep_threshold, run_experiment, validate,
                      write_outputs)
from .metrics import RunMetrics, summary
from .simulation import VERSION, Simulation, run_simulation

__version__ = VERSION

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "load_scenario",
    "parse_scenario",
    "RunMetrics",
    "summary",
    "Simulation",
    "run_simulation",
    "Experiment",
    "ExperimentError",
    "ExperimentResult",
    "build_sweep_malicious",
    "build_sweep_threshold",
    "build_compare_dsr",
    "run_experiment",
    "validate",
    "write_outputs",
]
