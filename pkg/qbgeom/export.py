"""
Serialization of trajectories, sweep matrices and run manifests.

CSV files are comma separated with a header row, a '.' decimal point and
every float written with 17 significant digits, so values read back exactly.
Manifests are flat JSON objects with dotted keys for nested models and a
stable key order. Every file is written to a temporary sibling first and then
renamed into place.
"""

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np

from .exceptions import OutputError
from .models.params import ModelParams
from .models.results import (
    AmplitudeTrajectory,
    ObservableSeries,
    RunManifest,
    SweepResult,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

TRAJECTORY_COLUMNS = [
    "t_gamma",
    "lambda_t",
    "re_c1",
    "im_c1",
    "re_c2",
    "im_c2",
    "population",
    "energy",
    "ergotropy",
    "power",
    "avg_power",
]
MATRIX_CORNER = "row\\col"


def format_number(value: Any) -> str:
    """Locale-independent text for a CSV cell."""
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_atomic(path: PathLike, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(
            prefix=f".{target.name}.", suffix=".tmp", dir=target.parent
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
    except OSError as exc:
        raise OutputError(f"cannot write {target}: {exc}") from exc
    logger.debug("wrote %s (%d bytes)", target, len(text))
    return target


def write_csv(
    path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(value) for value in row])
    return write_atomic(path, buffer.getvalue())


def write_json(path: PathLike, payload: Any) -> Path:
    return write_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def manifest_path(output: PathLike) -> Path:
    """Manifest written next to ``output``: ``<output>.manifest.json``."""
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def _flatten(prefix: str, value: Any, out: Dict[str, Any]) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, item, out)
    else:
        out[prefix] = value


def flatten_manifest(manifest: RunManifest) -> Dict[str, Any]:
    """Flat dict with dotted keys for nested models (``params.lambda``)."""
    flat: Dict[str, Any] = {}
    _flatten("", manifest.model_dump(mode="json", by_alias=True), flat)
    return dict(sorted(flat.items()))


def unflatten_manifest(flat: Dict[str, Any]) -> RunManifest:
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        node = nested
        *parents, leaf = key.split(".")
        for part in parents:
            node = node.setdefault(part, {})
        node[leaf] = value
    return RunManifest.model_validate(nested)


def write_manifest(output: PathLike, manifest: RunManifest) -> Path:
    return write_json(manifest_path(output), flatten_manifest(manifest))


def read_manifest(path: PathLike) -> RunManifest:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            flat = json.load(handle)
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    return unflatten_manifest(flat)


def trajectory_columns(
    traj: AmplitudeTrajectory, series: ObservableSeries, params: ModelParams
) -> Dict[str, np.ndarray]:
    return {
        "t_gamma": traj.t_grid,
        "lambda_t": params.lambda_ * traj.t_grid,
        "re_c1": traj.c1.real,
        "im_c1": traj.c1.imag,
        "re_c2": traj.c2.real,
        "im_c2": traj.c2.imag,
        "population": series.population,
        "energy": series.energy,
        "ergotropy": series.ergotropy,
        "power": series.power,
        "avg_power": series.average_power,
    }


def write_columns(
    path: PathLike, columns: Dict[str, np.ndarray], fmt: str = "csv"
) -> Path:
    """Write equal-length named columns as CSV rows or as a JSON object."""
    if fmt == "json":
        return write_json(
            path,
            {
                "columns": list(columns),
                "data": {name: np.asarray(v).tolist() for name, v in columns.items()},
            },
        )
    arrays = [np.asarray(v) for v in columns.values()]
    return write_csv(path, list(columns), zip(*(a.tolist() for a in arrays)))


def write_trajectory(
    path: PathLike,
    traj: AmplitudeTrajectory,
    series: ObservableSeries,
    params: ModelParams,
    fmt: str = "csv",
) -> Path:
    return write_columns(path, trajectory_columns(traj, series, params), fmt)


def matrix_rows(result: SweepResult) -> List[List[Any]]:
    header = [MATRIX_CORNER] + result.col_values().tolist()
    rows = [header]
    for value, row in zip(result.row_values().tolist(), result.values.tolist()):
        rows.append([value] + row)
    return rows


def write_matrix(path: PathLike, result: SweepResult, fmt: str = "csv") -> Path:
    """Matrix with a header row of column-axis values and a leading row-axis column."""
    if fmt == "json":
        return write_json(
            path,
            {
                "observable": result.observable,
                "row_axis": result.row_axis.axis if result.row_axis else None,
                "col_axis": result.col_axis.axis if result.col_axis else None,
                "row_values": result.row_values().tolist(),
                "col_values": result.col_values().tolist(),
                "values": result.values.tolist(),
            },
        )
    header, *rows = matrix_rows(result)
    return write_csv(path, [format_number(v) for v in header], rows)
