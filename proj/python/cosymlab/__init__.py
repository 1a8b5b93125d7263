"""Python interface to the cosymplectic geometry laboratory."""

import json as _json

from ._core import (
    Manifold,
    builtin_field_names,
    canonicalize,
    command_names,
    evaluate_field,
    flux_of_loop,
    hamiltonian_velocity,
    poisson_bracket_value,
    reeb_flow,
    run_json,
    volume_pairing,
)

__all__ = [
    "Manifold",
    "builtin_field_names",
    "canonicalize",
    "command_names",
    "evaluate_field",
    "flux_of_loop",
    "hamiltonian_velocity",
    "poisson_bracket_value",
    "reeb_flow",
    "run",
    "run_json",
    "volume_pairing",
]


def run(command, config, *, seed=None, tolerance=None, steps=None):
    """Run one of the named checks and return its report as a dict.

    ``config`` is the key-value text used by the command-line tool (manifold
    description plus command parameters).
    """
    return _json.loads(run_json(command, config, seed=seed, tolerance=tolerance, steps=steps))
