"""Evacuation trees for mixed-range vehicle fleets."""

import json
import os

from . import _core
from ._core import ConfigError, OracleRefusal, bpr_time, tau_from_range

__all__ = [
    "ConfigError",
    "OracleRefusal",
    "bpr_time",
    "default_config",
    "export",
    "load_scenario",
    "oracle",
    "solve",
    "tau_from_range",
    "validate",
]


def _scenario_doc(scenario, base_dir=None):
    """Accepts a path, a dict or a JSON string; returns (document, base_dir)."""
    if isinstance(scenario, dict):
        return json.dumps(scenario), base_dir or "."
    if isinstance(scenario, (str, os.PathLike)) and os.path.exists(scenario):
        path = os.fspath(scenario)
        with open(path) as fh:
            return fh.read(), base_dir or os.path.dirname(os.path.abspath(path))
    return str(scenario), base_dir or "."


def _solution_doc(solution):
    if isinstance(solution, dict):
        return json.dumps(solution)
    if isinstance(solution, (str, os.PathLike)) and os.path.exists(solution):
        with open(solution) as fh:
            return fh.read()
    return str(solution)


def load_scenario(scenario, base_dir=None):
    """Canonical scenario dict with explicit per-class demand."""
    doc, base = _scenario_doc(scenario, base_dir)
    return json.loads(_core.normalize_scenario(doc, base))


def default_config():
    return json.loads(_core.default_config())


def solve(scenario, config=None, base_dir=None):
    doc, base = _scenario_doc(scenario, base_dir)
    cfg = "" if config is None else json.dumps({**default_config(), **config})
    return json.loads(_core.solve(doc, base, cfg))


def validate(solution, scenario, base_dir=None):
    doc, base = _scenario_doc(scenario, base_dir)
    return json.loads(_core.validate(_solution_doc(solution), doc, base))


def oracle(scenario, base_dir=None):
    doc, base = _scenario_doc(scenario, base_dir)
    return json.loads(_core.oracle(doc, base))


def export(solution, format="graph"):
    return _core.export(_solution_doc(solution), format)
