"""Unit tests for the CSV and manifest artifact formats."""

import json

import numpy as np
import pytest

from mpodyn.errors import ConfigError
from mpodyn.output import (
    CSV_SCHEMA_VERSION,
    MAGIC,
    format_float,
    jsonable,
    read_csv,
    read_manifest,
    write_csv,
    write_manifest,
)


def test_format_float_round_trips():
    for x in (0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0):
        assert float(format_float(x)) == x


def test_csv_round_trip(tmp_path):
    path = tmp_path / "series.csv"
    t = np.arange(5, dtype=float)
    v = np.array([0.0, -0.1, 1.0 / 3.0, -2.7e-9, 4.0])
    write_csv(
        path,
        "norm-decay",
        [("t", t), ("value", v)],
        meta={"sites": 8, "rate": 0.1, "engine": "dense", "l1": True},
    )
    text = path.read_text()
    assert text.startswith(f"# {MAGIC} v{CSV_SCHEMA_VERSION}\n")
    assert "# kind: norm-decay\n" in text
    assert "# columns: t,value\n" in text
    data = read_csv(path)
    assert data.version == CSV_SCHEMA_VERSION
    assert data.kind == "norm-decay"
    assert data.meta["sites"] == "8"
    assert data.n_rows == 5
    np.testing.assert_array_equal(data.columns["t"], t)
    # 17 significant digits round-trip bit-for-bit
    np.testing.assert_array_equal(data.columns["value"], v)


def test_csv_write_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cols = [("t", [1.0, 2.0]), ("x", [0.3, 0.7])]
    write_csv(a, "sop", cols, meta={"cut": 2})
    write_csv(b, "sop", cols, meta={"cut": 2})
    assert a.read_bytes() == b.read_bytes()
    assert "T" not in a.read_text().split("\n")[0]  # no timestamps anywhere


def test_csv_rejects_ragged_columns(tmp_path):
    with pytest.raises(ConfigError):
        write_csv(tmp_path / "bad.csv", "sop", [("a", [1.0]), ("b", [1.0, 2.0])])


def test_read_csv_schema_mismatch(tmp_path):
    path = tmp_path / "future.csv"
    path.write_text("# mpodyn-csv v2\n# kind: sop\n# columns: t\n1.0\n")
    with pytest.raises(ConfigError, match="expected.*1.*found.*2"):
        read_csv(path)
    missing = tmp_path / "missing.csv"
    missing.write_text("t,value\n1.0,2.0\n")
    with pytest.raises(ConfigError):
        read_csv(missing)
    headless = tmp_path / "headless.csv"
    headless.write_text(f"# {MAGIC} v1\n# kind: sop\n1.0\n")
    with pytest.raises(ConfigError):
        read_csv(headless)


def test_read_csv_empty_rows(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv(path, "norm-decay", [("t", []), ("value", [])], meta={})
    data = read_csv(path)
    assert data.n_rows == 0
    assert set(data.columns) == {"t", "value"}


def test_jsonable_conversions():
    out = jsonable(
        {
            "a": np.float64(0.5),
            "b": np.int64(3),
            "c": np.array([1.0, 2.0]),
            "d": [np.float64(np.nan), np.float64(np.inf)],
            "e": "text",
        }
    )
    assert out["a"] == 0.5 and isinstance(out["a"], float)
    assert out["b"] == 3 and isinstance(out["b"], int)
    assert out["c"] == [1.0, 2.0]
    assert out["d"] == [None, None]
    json.dumps(out)  # must serialize cleanly


def test_manifest_round_trip(tmp_path):
    path = tmp_path / "run_manifest.json"
    payload = {"mode": "circuit", "children": [{"seed": 1}], "created": "now"}
    write_manifest(path, payload)
    assert read_manifest(path) == payload
    # keys are sorted for reproducible bytes
    text = path.read_text()
    assert text.index('"children"') < text.index('"mode"')
