"""Rendering behavior on synthetic artifacts."""

import pytest
from conftest import error_trace_csv, norm_decay_csv, nscale_csv, sop_csv, write_table

from mpofig import DataError, FigureRecipe, SchemaError, render
from mpofig.errors import RecipeError


def _render(tmp_path, figure, paths, name="fig.png"):
    recipe = FigureRecipe(figure=figure, inputs=tuple(str(p) for p in paths))
    return render(recipe, tmp_path / name)


def test_all_seven_figures_render(tmp_path):
    inputs = {
        "norm-decay": [norm_decay_csv(tmp_path / "nd.csv")],
        "nscale": [nscale_csv(tmp_path / "ns.csv")],
        "l2-errors": [error_trace_csv(tmp_path / "et.csv")],
        "lambda-factor": [error_trace_csv(tmp_path / "lf.csv")],
        "lindblad-norm": [norm_decay_csv(tmp_path / "ln.csv", dynamics="lindblad")],
        "lindblad-errors": [
            error_trace_csv(tmp_path / "le.csv", dynamics="lindblad")
        ],
        "sop": [sop_csv(tmp_path / "s4.csv", sites=4), sop_csv(tmp_path / "s6.csv")],
    }
    for figure, paths in inputs.items():
        out = _render(tmp_path, figure, paths, name=f"{figure}.png")
        assert out.exists() and out.stat().st_size > 0


def test_rerender_is_byte_identical(tmp_path):
    path = error_trace_csv(tmp_path / "et.csv")
    first = _render(tmp_path, "l2-errors", [path], name="a.png").read_bytes()
    second = _render(tmp_path, "l2-errors", [path], name="b.png").read_bytes()
    assert first == second


def test_bound_violation_blocks_render(tmp_path):
    path = error_trace_csv(tmp_path / "et.csv", violate_at=5)
    out = tmp_path / "fig.png"
    with pytest.raises(DataError, match="exceeds the bound.*t=6"):
        render(FigureRecipe(figure="l2-errors", inputs=(str(path),)), out)
    assert not out.exists()


def test_empty_csv_blocks_render_cleanly(tmp_path):
    path = write_table(tmp_path / "e.csv", "sop", {}, [("t", []), ("s_op", [])])
    out = tmp_path / "fig.png"
    with pytest.raises(DataError, match="no data rows"):
        render(FigureRecipe(figure="sop", inputs=(str(path),)), out)
    assert not out.exists()


def test_kind_mismatch_blocks_render(tmp_path):
    path = sop_csv(tmp_path / "s.csv")
    out = tmp_path / "fig.png"
    with pytest.raises(SchemaError, match="expected kind 'error-trace', found 'sop'"):
        render(FigureRecipe(figure="l2-errors", inputs=(str(path),)), out)
    assert not out.exists()


def test_dynamics_mismatch_blocks_render(tmp_path):
    path = norm_decay_csv(tmp_path / "nd.csv", dynamics="circuit")
    with pytest.raises(DataError, match="dynamics 'circuit' does not fit"):
        _render(tmp_path, "lindblad-norm", [path])


def test_missing_lambda_column_reported(tmp_path):
    path = error_trace_csv(tmp_path / "et.csv")
    table_text = path.read_text().splitlines()
    # strip the lambda column to simulate an l1-disabled run
    header = table_text[4].replace("# columns: ", "").split(",")
    keep = [i for i, name in enumerate(header) if name != "lambda"]
    lines = table_text[:4]
    lines.append("# columns: " + ",".join(header[i] for i in keep))
    for row in table_text[5:]:
        cells = row.split(",")
        lines.append(",".join(cells[i] for i in keep))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(DataError, match="no 'lambda' column"):
        _render(tmp_path, "lambda-factor", [path])


def test_norm_decay_with_closed_form_overlay(tmp_path):
    path = norm_decay_csv(tmp_path / "nd.csv", dynamics="pure", closed_form=True)
    out = _render(tmp_path, "norm-decay", [path])
    assert out.exists()


def test_unsupported_output_format_rejected(tmp_path):
    path = sop_csv(tmp_path / "s.csv")
    with pytest.raises(RecipeError, match="unsupported output format '.bmp'"):
        _render(tmp_path, "sop", [path], name="fig.bmp")


def test_svg_and_pdf_render(tmp_path):
    path = sop_csv(tmp_path / "s.csv")
    for name in ("fig.svg", "fig.pdf"):
        out = _render(tmp_path, "sop", [path], name=name)
        assert out.exists() and out.stat().st_size > 0


def test_svg_rerender_is_byte_identical(tmp_path):
    path = sop_csv(tmp_path / "s.csv")
    a = _render(tmp_path, "sop", [path], name="a.svg").read_bytes()
    b = _render(tmp_path, "sop", [path], name="b.svg").read_bytes()
    assert a == b


def test_inputs_untouched_by_render(tmp_path):
    path = error_trace_csv(tmp_path / "et.csv")
    before = path.read_bytes()
    _render(tmp_path, "l2-errors", [path])
    assert path.read_bytes() == before
