"""Distributed payoff allocation over switching communication graphs."""

from ._corereach import (
    ConfigError,
    ContractError,
    EmptySetError,
    Game,
    MonitorError,
    NonconvergenceError,
    Polyhedron,
    core_polyhedron,
    run_experiment,
    validate_config,
)

__all__ = [
    "ConfigError",
    "ContractError",
    "EmptySetError",
    "Game",
    "MonitorError",
    "NonconvergenceError",
    "Polyhedron",
    "core_polyhedron",
    "run_experiment",
    "validate_config",
]
