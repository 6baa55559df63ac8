"""Polygonal-path propagator for a particle among rigid walls.

Profiles come back as dicts of numpy arrays (``coordinate``, ``intensity``,
``n_paths``, ``shadow``); points are 2-vectors.
"""

from ._polyprop import (
    NumericalError,
    Scenario,
    ValidationError,
    compare,
    enumerate_paths,
    free_kernel,
    load_scenario,
    oracle_profile,
    parse_scenario,
    polygon_profile,
    run,
    simulate,
)

__all__ = [
    "NumericalError",
    "Scenario",
    "ValidationError",
    "compare",
    "enumerate_paths",
    "free_kernel",
    "load_scenario",
    "oracle_profile",
    "parse_scenario",
    "polygon_profile",
    "run",
    "simulate",
]
