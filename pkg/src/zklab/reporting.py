"""Deterministic artifact emission: CSV tables, JSON manifests, frame files.

All writes are atomic (temp file in the destination directory, then rename)
and all floats are printed with 17 significant digits so that reruns of the
same configuration produce byte-identical bodies and values round-trip.
"""

from __future__ import annotations

import hashlib
import json
import os
import platform
import tempfile

import numpy as np

from .errors import DataError
from .spectral import Field, Grid2D, make_field

__all__ = ["format_value", "write_csv", "write_json", "write_frame_csv",
           "read_frame_csv", "build_manifest", "validate_manifest",
           "MANIFEST_SCHEMA", "DiagnosticsRecorder"]


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: list[str], rows) -> None:
    """Plain CSV with one header line; cells formatted via format_value."""
    lines = [",".join(header)]
    for row in rows:
        if isinstance(row, dict):
            cells = [row.get(col.split(" ")[0], "") for col in header]
        else:
            cells = list(row)
        lines.append(",".join(format_value(c) for c in cells))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, payload: dict) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True,
                                   default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


# -- frame files -----------------------------------------------------------------

def write_frame_csv(path: str, field: Field) -> None:
    """Grid of physical values; the header records geometry (box units)."""
    grid = field.grid
    header = (f"# zklab-frame nx={grid.nx} ny={grid.ny} "
              f"lx={grid.lx:.17g} ly={grid.ly:.17g}")
    vals = field.values
    lines = [header, "# rows are x-index, columns y-index, dimensionless u"]
    for i in range(grid.nx):
        lines.append(",".join(f"{v:.17g}" for v in vals[i]))
    _atomic_write(path, "\n".join(lines) + "\n")


def read_frame_csv(path: str) -> Field:
    with open(path) as fh:
        first = fh.readline().strip()
        if not first.startswith("# zklab-frame"):
            raise DataError(f"{path} is not a frame file (missing header)")
        meta = dict(tok.split("=") for tok in first.split()[2:])
        rows = []
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(tok) for tok in line.split(",")])
    grid = Grid2D(int(meta["nx"]), int(meta["ny"]),
                  float(meta["lx"]), float(meta["ly"]))
    vals = np.asarray(rows)
    if vals.shape != (grid.nx, grid.ny):
        raise DataError(f"frame body {vals.shape} does not match header "
                        f"({grid.nx}, {grid.ny})")
    return make_field(grid, vals)


# -- manifests --------------------------------------------------------------------

MANIFEST_SCHEMA = {
    "tool": str,
    "version": str,
    "subcommand": str,
    "config": dict,
    "config_sha256": str,
    "seed": (int, type(None)),
    "versions": dict,
    "wall_time_s": float,
    "outputs": list,
}


def build_manifest(subcommand: str, config: dict, wall_time_s: float,
                   outputs: list[str], extra: dict | None = None) -> dict:
    from . import __version__

    canonical = json.dumps(config, sort_keys=True, default=_json_default)
    manifest = {
        "tool": "zklab",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "config_sha256": hashlib.sha256(canonical.encode()).hexdigest(),
        "seed": config.get("seed"),
        "versions": {"python": platform.python_version(),
                     "numpy": np.__version__},
        "wall_time_s": float(wall_time_s),
        "outputs": sorted(outputs),
    }
    if extra:
        manifest.update(extra)
    validate_manifest(manifest)
    return manifest


def validate_manifest(manifest: dict) -> None:
    """Check the documented schema: required keys with the listed types."""
    for key, typ in MANIFEST_SCHEMA.items():
        if key not in manifest:
            raise DataError(f"manifest missing required key {key!r}")
        if not isinstance(manifest[key], typ):
            raise DataError(f"manifest key {key!r} has type "
                            f"{type(manifest[key]).__name__}, expected {typ}")


# -- run diagnostics ----------------------------------------------------------------

class DiagnosticsRecorder:
    """Per-sample conservation diagnostics, usable as an evolve callback."""

    HEADER = ["t (time units)", "mass (integral u^2)", "energy",
              "l2 (spatial L2)", "linf (max |u|)"]

    def __init__(self):
        self.rows: list[tuple] = []

    def __call__(self, t: float, field: Field) -> None:
        from .imethod import energy, mass

        vals = field.values
        self.rows.append((t, mass(field), energy(field),
                          float(np.sqrt(np.sum(vals * vals) * field.grid.cell_area)),
                          float(np.max(np.abs(vals)))))

    @property
    def last_row(self) -> dict:
        if not self.rows:
            return {}
        return dict(zip(("t", "mass", "energy", "l2", "linf"), self.rows[-1]))
