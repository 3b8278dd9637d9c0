"""Reader for the mpodyn CSV artifact format.

The format is plain comma-separated text with ``#``-prefixed header lines:
a schema tag (``# mpodyn-csv v1``), a ``# kind: <name>`` tag, optional
``# key: value`` scalar metadata, and a ``# columns: a,b,c`` list naming
the data columns.  Every following line is one row of floats.  The reader
is deliberately independent of the producing package: the file format is
the contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SchemaError

MAGIC = "mpodyn-csv"
SUPPORTED_VERSION = 1


@dataclass
class CsvTable:
    """Parsed CSV payload: schema version, kind, metadata, column arrays."""

    version: int
    kind: str
    meta: dict = field(default_factory=dict)
    columns: dict = field(default_factory=dict)
    path: str = ""

    @property
    def n_rows(self) -> int:
        if not self.columns:
            return 0
        return next(iter(self.columns.values())).size

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            have = ", ".join(sorted(self.columns))
            msg = f"{self.path}: no column {name!r} (have: {have})"
            raise SchemaError(msg) from None


def _parse_meta_value(text: str):
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def load_table(path) -> CsvTable:
    """Parse one CSV artifact.

    Raises:
        SchemaError: On a missing or unsupported schema tag (the message
            names both the expected and the found version), a malformed
            header, or a non-numeric data cell.
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith(f"# {MAGIC} v"):
        msg = (
            f"{path}: missing schema tag; expected first line "
            f"'# {MAGIC} v{SUPPORTED_VERSION}'"
        )
        raise SchemaError(msg)
    try:
        version = int(lines[0][len(f"# {MAGIC} v") :])
    except ValueError:
        raise SchemaError(f"{path}: unreadable schema version in {lines[0]!r}") from None
    if version != SUPPORTED_VERSION:
        msg = (
            f"{path}: schema version mismatch; expected {MAGIC} "
            f"v{SUPPORTED_VERSION}, found v{version}"
        )
        raise SchemaError(msg)

    kind = None
    names = None
    meta: dict = {}
    body_start = len(lines)
    for i, line in enumerate(lines[1:], start=1):
        if not line.startswith("#"):
            body_start = i
            break
        text = line[1:].strip()
        if ":" not in text:
            raise SchemaError(f"{path}: malformed header line {line!r}")
        key, value = (part.strip() for part in text.split(":", 1))
        if key == "kind":
            kind = value
        elif key == "columns":
            names = [c.strip() for c in value.split(",") if c.strip()]
        else:
            meta[key] = _parse_meta_value(value)
    if kind is None:
        raise SchemaError(f"{path}: header lacks a '# kind:' tag")
    if not names:
        raise SchemaError(f"{path}: header lacks a '# columns:' list")

    rows = []
    for i, line in enumerate(lines[body_start:], start=body_start):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(names):
            msg = (
                f"{path}: row {i + 1} has {len(cells)} cells, "
                f"expected {len(names)}"
            )
            raise SchemaError(msg)
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            raise SchemaError(f"{path}: non-numeric cell in row {i + 1}") from None

    data = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(names))
    columns = {name: data[:, j] for j, name in enumerate(names)}
    return CsvTable(
        version=version, kind=kind, meta=meta, columns=columns, path=str(path)
    )


def require_kind(table: CsvTable, expected: str) -> CsvTable:
    """Check the table's kind tag, with a message naming both sides."""
    if table.kind != expected:
        msg = f"{table.path}: expected kind {expected!r}, found {table.kind!r}"
        raise SchemaError(msg)
    return table
