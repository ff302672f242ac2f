"""Annealing passages of frustrated Ising and spin-boson rings."""

from ._core import (
    ConfigError,
    Error,
    PassageSpec,
    build_fair_pair,
    default_n_max,
    ising_energies,
    linear_spec,
    run_cli,
    run_passage,
    sweep,
    tabulate,
)
from .tables import (
    read_fairness,
    read_levels,
    read_spectrum,
    read_sweep,
    read_trace,
)

__all__ = [
    "ConfigError",
    "Error",
    "PassageSpec",
    "build_fair_pair",
    "default_n_max",
    "ising_energies",
    "linear_spec",
    "run_cli",
    "run_passage",
    "sweep",
    "tabulate",
    "read_fairness",
    "read_levels",
    "read_spectrum",
    "read_sweep",
    "read_trace",
]
