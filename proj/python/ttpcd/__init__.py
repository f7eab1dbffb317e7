"""Python bindings for the ttpcd co-evolutionary diversity optimiser."""

import json

from ._ttpcd import (
    Instance,
    InitializationError,
    InvalidInstance,
    ParseError,
    eax,
    generate_instance,
    is_feasible,
    kruskal_wallis,
    load_instance,
    mann_whitney_u,
    objective,
    parse_instance,
    solve_kp,
    solve_tsp,
    tour_length,
)
from ._ttpcd import _run


def run(instance, mode="coea", policy="gamma2", seed=1, budget_multiplier=1_000_000.0, alpha=0.1, mu=50,
        zmin_mode="dynamic"):
    """Runs one experiment cell and returns its summary as a dict (plus the run log CSV text)."""
    return json.loads(_run(instance, mode, policy, seed, budget_multiplier, alpha, mu, zmin_mode))


__all__ = [
    "Instance",
    "InitializationError",
    "InvalidInstance",
    "ParseError",
    "eax",
    "generate_instance",
    "is_feasible",
    "kruskal_wallis",
    "load_instance",
    "mann_whitney_u",
    "objective",
    "parse_instance",
    "run",
    "solve_kp",
    "solve_tsp",
    "tour_length",
]
