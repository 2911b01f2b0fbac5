"""Ant-colony routing simulator (ARA / EARA / AntNet-FA).

Thin wrapper over the compiled core. Scenarios are JSON documents (see the
repository README for the schema); helpers here accept either a JSON string
or a plain dict.
"""

import json as _json
import os as _os
import sys as _sys

try:
    from ._core import (  # type: ignore
        HopProbability,
        PheromoneTable,
        RngStream,
        __version__,
        init_classic,
        init_gamma,
        normalize_scenario,
        run_sweep,
        run_sweep_report,
        sample_next_hop,
        validate_scenario,
    )
    from ._core import run_scenario as _run_scenario
except ImportError:  # development tree: module lives in the build dir
    _core_dir = _os.environ.get("ACOROUTE_CORE_DIR")
    if not _core_dir:
        raise
    _sys.path.insert(0, _core_dir)
    from _core import (  # type: ignore
        HopProbability,
        PheromoneTable,
        RngStream,
        __version__,
        init_classic,
        init_gamma,
        normalize_scenario,
        run_sweep,
        run_sweep_report,
        sample_next_hop,
        validate_scenario,
    )
    from _core import run_scenario as _run_scenario

__all__ = [
    "HopProbability",
    "PheromoneTable",
    "RngStream",
    "__version__",
    "init_classic",
    "init_gamma",
    "normalize_scenario",
    "run",
    "run_scenario",
    "run_sweep",
    "run_sweep_report",
    "sample_next_hop",
    "validate",
    "validate_scenario",
]


def _as_json(scenario):
    if isinstance(scenario, str):
        return scenario
    return _json.dumps(scenario)


def run_scenario(scenario, seed, trace_path="", pheromone_dump_path=""):
    """Run one scenario (JSON string or dict); returns the metrics dict."""
    return _run_scenario(_as_json(scenario), seed, trace_path, pheromone_dump_path)


def validate(scenario):
    """Return the list of scenario violations (empty when valid)."""
    return validate_scenario(_as_json(scenario))


run = run_scenario
