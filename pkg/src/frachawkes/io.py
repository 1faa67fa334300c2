"""CSV/JSON artifact serialization and run manifests.

CSV artifacts are RFC-4180-style with '.' decimal separator and 17
significant digits, enough to round-trip doubles exactly.  Every CLI run
also writes a manifest JSON from which the artifacts can be regenerated
bit-identically.
"""

import csv
import json

import numpy as np

from . import __version__
from .analysis import CurveGrid

__all__ = ["write_curve_csv", "read_curve_csv", "write_curve_json", "write_manifest"]


def _fmt(v):
    return f"{v:.17g}"


def write_curve_csv(grid, path):
    """Write a CurveGrid as `x,y` CSV; metadata goes in a JSON sidecar."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for xv, yv in zip(grid.x, grid.y):
            writer.writerow([_fmt(xv), _fmt(yv)])
    sidecar = str(path) + ".meta.json"
    with open(sidecar, "w") as fh:
        json.dump(grid.meta, fh, indent=2)
    return sidecar


def read_curve_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    try:
        with open(str(path) + ".meta.json") as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        meta = {}
    return CurveGrid(x=data[:, 0], y=data[:, 1], meta=meta)


def write_curve_json(grid, path):
    doc = {"x": [float(v) for v in grid.x], "y": [float(v) for v in grid.y], "meta": grid.meta}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)


def write_manifest(
    path,
    command,
    params,
    artifact_files,
    horizon=None,
    grid=None,
    seed=None,
    replications=None,
    tolerances=None,
):
    """Record everything needed to regenerate the run's artifacts."""
    doc = {
        "command": command,
        "params": params.as_dict() if params is not None else None,
        "horizon": horizon,
        "grid": grid,
        "seed": seed,
        "replications": replications,
        "tolerances": tolerances or {},
        "artifact_files": [str(p) for p in artifact_files],
        "tool_version": __version__,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
    return doc
