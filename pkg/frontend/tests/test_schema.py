"""Contract tests of the CSV artifact reader."""

import numpy as np
import pytest
from conftest import write_table

from mpofig import SchemaError, load_table
from mpofig.schema import require_kind


def test_roundtrip_parses_columns_and_meta(tmp_path):
    path = write_table(
        tmp_path / "a.csv",
        "norm-decay",
        {"sites": 4, "rate": 0.05, "flag": "true", "label": "run-a"},
        [("t", [1.0, 2.0]), ("v", [0.5, 0.25])],
    )
    table = load_table(path)
    assert table.version == 1
    assert table.kind == "norm-decay"
    assert table.meta["sites"] == 4
    assert table.meta["rate"] == pytest.approx(0.05)
    assert table.meta["flag"] is True
    assert table.meta["label"] == "run-a"
    assert table.n_rows == 2
    np.testing.assert_allclose(table.column("v"), [0.5, 0.25])


def test_version_mismatch_names_both_versions(tmp_path):
    path = write_table(tmp_path / "a.csv", "sop", {}, [("t", [1.0])], version=2)
    with pytest.raises(SchemaError, match=r"expected mpodyn-csv v1, found v2"):
        load_table(path)


def test_missing_magic_rejected(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("t,v\n1,2\n", encoding="utf-8")
    with pytest.raises(SchemaError, match="missing schema tag"):
        load_table(path)


def test_missing_kind_rejected(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("# mpodyn-csv v1\n# columns: t\n1\n", encoding="utf-8")
    with pytest.raises(SchemaError, match="kind"):
        load_table(path)


def test_ragged_row_rejected(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text(
        "# mpodyn-csv v1\n# kind: sop\n# columns: t,v\n1,2\n3\n", encoding="utf-8"
    )
    with pytest.raises(SchemaError, match="row 5 has 1 cells, expected 2"):
        load_table(path)


def test_non_numeric_cell_rejected(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text(
        "# mpodyn-csv v1\n# kind: sop\n# columns: t,v\n1,x\n", encoding="utf-8"
    )
    with pytest.raises(SchemaError, match="non-numeric"):
        load_table(path)


def test_empty_table_has_zero_rows(tmp_path):
    path = write_table(tmp_path / "a.csv", "sop", {}, [("t", []), ("v", [])])
    table = load_table(path)
    assert table.n_rows == 0


def test_missing_column_lists_available(tmp_path):
    path = write_table(tmp_path / "a.csv", "sop", {}, [("t", [1.0])])
    table = load_table(path)
    with pytest.raises(SchemaError, match="no column 'v'"):
        table.column("v")


def test_require_kind_names_both_sides(tmp_path):
    path = write_table(tmp_path / "a.csv", "sop", {}, [("t", [1.0])])
    table = load_table(path)
    with pytest.raises(SchemaError, match="expected kind 'nscale', found 'sop'"):
        require_kind(table, "nscale")
