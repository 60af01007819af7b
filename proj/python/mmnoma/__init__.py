"""Python front end for the mmnoma simulator."""

import csv
import io
import json

from ._mmnoma import (
    CapacityError,
    ConfigError,
    GeometryError,
    array_response,
    count_schedules,
    path_loss,
)
from . import _mmnoma

__all__ = [
    "CapacityError",
    "ConfigError",
    "GeometryError",
    "array_response",
    "count_schedules",
    "default_config",
    "path_loss",
    "simulate",
]


def default_config():
    return json.loads(_mmnoma.default_config())


def simulate(config):
    """Run an experiment. Returns (rows, metadata)."""
    text = config if isinstance(config, str) else json.dumps(config)
    table, meta = _mmnoma.run_json(text)
    rows = list(csv.DictReader(io.StringIO(table)))
    for row in rows:
        row["run"] = int(row["run"])
        row["sum_rate"] = float(row["sum_rate"])
        row["feasible"] = row["feasible"] == "1"
        row["seed"] = int(row["seed"])
        row["sweep_value"] = float(row["sweep_value"]) if row["sweep_value"] else None
    return rows, json.loads(meta)
