"""Exit-code and artifact behavior of the render CLI."""

import json

from conftest import error_trace_csv, sop_csv, write_table

from mpofig.cli import main


def _recipe(tmp_path, payload, name="r.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_render_success(tmp_path, capsys):
    sop_csv(tmp_path / "s.csv")
    recipe = _recipe(tmp_path, {"figure": "sop", "inputs": ["s.csv"]})
    out = tmp_path / "fig.png"
    code = main(["render", "--recipe", str(recipe), "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_bad_recipe_exits_2(tmp_path, capsys):
    recipe = _recipe(tmp_path, {"figure": "nope", "inputs": ["s.csv"]})
    code = main(["render", "--recipe", str(recipe), "--out", str(tmp_path / "f.png")])
    assert code == 2
    assert "unknown figure id" in capsys.readouterr().err


def test_schema_mismatch_exits_3(tmp_path, capsys):
    write_table(tmp_path / "s.csv", "sop", {}, [("t", [1.0]), ("s_op", [0.1])], version=9)
    recipe = _recipe(tmp_path, {"figure": "sop", "inputs": ["s.csv"]})
    code = main(["render", "--recipe", str(recipe), "--out", str(tmp_path / "f.png")])
    assert code == 3
    assert "found v9" in capsys.readouterr().err


def test_bound_violation_exits_4_without_output(tmp_path, capsys):
    error_trace_csv(tmp_path / "et.csv", violate_at=3)
    recipe = _recipe(tmp_path, {"figure": "l2-errors", "inputs": ["et.csv"]})
    out = tmp_path / "f.png"
    code = main(["render", "--recipe", str(recipe), "--out", str(out)])
    assert code == 4
    assert not out.exists()
    assert "exceeds the bound" in capsys.readouterr().err


def test_missing_input_file_exits_10(tmp_path, capsys):
    recipe = _recipe(tmp_path, {"figure": "sop", "inputs": ["absent.csv"]})
    code = main(["render", "--recipe", str(recipe), "--out", str(tmp_path / "f.png")])
    assert code == 10
    assert "absent.csv" in capsys.readouterr().err
