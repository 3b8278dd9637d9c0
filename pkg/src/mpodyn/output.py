"""CSV and JSON run-artifact formats.

CSV files are comma-separated with ``#``-prefixed header lines: a schema
tag, a ``kind`` tag, scalar metadata, and the column list.  Floats carry 17
significant digits so parsing reproduces them bit-for-bit.  Timestamps
never appear in CSV (only in the JSON manifest), keeping repeated runs
byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

CSV_SCHEMA_VERSION = 1
MAGIC = "mpodyn-csv"


def format_float(x) -> str:
    """Render a float with 17 significant digits (round-trip exact)."""
    return f"{float(x):.17g}"


def _format_meta_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


@dataclass
class CsvData:
    """Parsed CSV payload: schema version, kind, metadata, column arrays."""

    version: int
    kind: str
    meta: dict
    columns: dict

    @property
    def n_rows(self) -> int:
        if not self.columns:
            return 0
        return next(iter(self.columns.values())).size


def write_csv(path, kind: str, columns, meta: dict | None = None) -> None:
    """Write ``columns`` (name -> array pairs, equal lengths) to ``path``."""
    names = [name for name, _ in columns]
    arrays = [np.asarray(values, dtype=np.float64) for _, values in columns]
    if arrays:
        length = arrays[0].size
        for name, arr in zip(names, arrays):
            if arr.ndim != 1 or arr.size != length:
                msg = f"column {name!r} is not a 1-D array of length {length}"
                raise ConfigError(msg)
    lines = [f"# {MAGIC} v{CSV_SCHEMA_VERSION}", f"# kind: {kind}"]
    for key, value in (meta or {}).items():
        lines.append(f"# {key}: {_format_meta_value(value)}")
    lines.append("# columns: " + ",".join(names))
    for row in zip(*arrays):
        lines.append(",".join(format_float(x) for x in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> CsvData:
    """Parse a CSV written by :func:`write_csv`.

    Raises:
        ConfigError: On a missing/mismatched schema tag (the message names
            the expected and found versions) or a malformed header.
    """
    with open(path, encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    if not raw or not raw[0].startswith(f"# {MAGIC} v"):
        msg = f"{path}: missing schema tag '# {MAGIC} v<version>'"
        raise ConfigError(msg)
    try:
        version = int(raw[0].split("v")[-1])
    except ValueError as exc:
        msg = f"{path}: unreadable schema version in {raw[0]!r}"
        raise ConfigError(msg) from exc
    if version != CSV_SCHEMA_VERSION:
        msg = (
            f"{path}: schema version mismatch: expected v{CSV_SCHEMA_VERSION}, "
            f"found v{version}"
        )
        raise ConfigError(msg)
    kind = ""
    meta: dict = {}
    names: list[str] = []
    data_rows: list[str] = []
    for line in raw[1:]:
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" not in body:
                continue
            key, _, value = body.partition(":")
            key, value = key.strip(), value.strip()
            if key == "kind":
                kind = value
            elif key == "columns":
                names = [c.strip() for c in value.split(",") if c.strip()]
            else:
                meta[key] = value
        else:
            data_rows.append(line)
    if not names:
        msg = f"{path}: missing '# columns:' header"
        raise ConfigError(msg)
    table = np.array(
        [[float(cell) for cell in row.split(",")] for row in data_rows],
        dtype=np.float64,
    ).reshape(len(data_rows), len(names))
    columns = {name: table[:, i].copy() for i, name in enumerate(names)}
    return CsvData(version=version, kind=kind, meta=meta, columns=columns)


def jsonable(obj):
    """Recursively convert numpy scalars/arrays for JSON serialization."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def write_manifest(path, payload: dict) -> None:
    """Write the JSON run manifest (the only artifact with timestamps)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
