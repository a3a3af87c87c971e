"""Neumann polyharmonic eigenvalues with a mass density."""

import json

from ._pdlab import PdlabError, expected_kernel_dimension, weyl_reference
from . import _pdlab

__all__ = ["PdlabError", "expected_kernel_dimension", "weyl_reference", "solve", "sweep", "taylor"]


def solve(config):
    """Spectrum for one density. `config` is the experiment dict used by the CLI."""
    return json.loads(_pdlab.solve_json(json.dumps(config)))


def sweep(config):
    """Eps ladder: table rows, rate fits and the error message if the sweep stopped early."""
    return json.loads(_pdlab.sweep_json(json.dumps(config)))


def taylor(m, N, k, eps, spread_limit=10.0):
    return json.loads(_pdlab.taylor_json(m, N, k, list(eps), spread_limit))
