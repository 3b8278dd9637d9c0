"""Figure builders: one deterministic image per recipe.

Every builder validates its inputs (kind tag, required columns, non-empty
data, bound-vs-measured consistency) before any drawing happens, so a
failed render never leaves an output file behind.  Rendering is read-only
with respect to the inputs and uses a fixed style, so the same inputs
produce byte-identical images.
"""

from __future__ import annotations

import os
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .errors import DataError, RecipeError  # noqa: E402
from .recipes import FigureRecipe  # noqa: E402
from .schema import CsvTable, load_table, require_kind  # noqa: E402

_STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 110,
    "savefig.dpi": 150,
    "font.family": "DejaVu Sans",
    "font.size": 10.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "legend.fontsize": 8.5,
    "svg.hashsalt": "mpofig",
}

_BOUND_COLOR = "tab:red"


def _require_rows(table: CsvTable) -> CsvTable:
    if table.n_rows == 0:
        raise DataError(f"{table.path}: no data rows")
    return table


def _curve_label(table: CsvTable) -> str:
    parts = []
    sites = table.meta.get("sites")
    if sites is not None:
        parts.append(f"N={int(sites)}")
    if "rate" in table.meta:
        parts.append(f"p={table.meta['rate']:g}")
    elif "kappa" in table.meta:
        parts.append(f"κ={table.meta['kappa']:g}")
    return ", ".join(parts) or Path(table.path).stem


def _check_dynamics(table: CsvTable, expected: tuple[str, ...]) -> None:
    dyn = table.meta.get("dynamics")
    if dyn is not None and dyn not in expected:
        msg = (
            f"{table.path}: dynamics {dyn!r} does not fit this figure "
            f"(expected one of {', '.join(expected)})"
        )
        raise DataError(msg)


def _check_bound(table: CsvTable) -> None:
    """Pre-draw consistency: the bound curve must dominate the measured one."""
    if "bound" not in table.columns:
        return
    t = table.column("t")
    measured = table.column("l2_err")
    bound = table.column("bound")
    bad = np.flatnonzero(measured > bound)
    if bad.size:
        i = int(bad[0])
        msg = (
            f"{table.path}: measured error exceeds the bound at "
            f"{bad.size} sample(s), first at t={t[i]:g} "
            f"({measured[i]:.6g} > {bound[i]:.6g})"
        )
        raise DataError(msg)


def _draw_norm_like(ax, tables, expected_dynamics):
    for table in tables:
        require_kind(table, "norm-decay")
        _require_rows(table)
        _check_dynamics(table, expected_dynamics)
        t = table.column("t")
        ax.plot(t, table.column("log2_norm_per_site"), label=_curve_label(table))
        if "closed_form" in table.columns:
            ax.plot(
                t,
                table.column("closed_form"),
                linestyle="--",
                color=_BOUND_COLOR,
                label=_curve_label(table) + " (closed form)",
            )
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\log_2 \|\rho_t\|_2 \, / \, N$")
    ax.legend()


def _draw_errors_like(ax, tables, expected_dynamics):
    for table in tables:
        require_kind(table, "error-trace")
        _require_rows(table)
        _check_dynamics(table, expected_dynamics)
        _check_bound(table)
        t = table.column("t")
        ax.plot(t, table.column("l2_err"), label=_curve_label(table))
        if "bound" in table.columns:
            ax.plot(
                t,
                table.column("bound"),
                linestyle="--",
                color=_BOUND_COLOR,
                label=_curve_label(table) + " (bound)",
            )
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\|\rho_t - \sigma_t\|_2$")
    ax.legend()


def _draw_lambda(ax, tables):
    for table in tables:
        require_kind(table, "error-trace")
        _require_rows(table)
        if "lambda" not in table.columns:
            raise DataError(f"{table.path}: no 'lambda' column (run with l1 enabled)")
        ax.plot(table.column("t"), table.column("lambda"), label=_curve_label(table))
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\Lambda_t$")
    ax.legend()


def _draw_nscale(ax, tables):
    for table in tables:
        require_kind(table, "nscale")
        _require_rows(table)
        sites = table.column("sites")
        values = table.column("err_over_norm_sq")
        slope = float(np.dot(sites, values) / np.dot(sites, sites))
        label = f"p={table.meta['rate']:g}" if "rate" in table.meta else _curve_label(table)
        ax.plot(sites, values, "o", label=label)
        grid = np.linspace(0.0, float(sites.max()) * 1.05, 64)
        ax.plot(
            grid,
            slope * grid,
            linestyle="--",
            color=_BOUND_COLOR,
            label=f"{label} (origin fit)",
        )
    ax.set_xlabel("N")
    ax.set_ylabel(r"$(\|\rho-\sigma\|_2 / \|\rho\|_2)^2$")
    ax.set_xlim(left=0.0)
    ax.set_ylim(bottom=0.0)
    ax.legend()


def _draw_sop(ax, tables):
    for table in tables:
        require_kind(table, "sop")
        _require_rows(table)
        ax.plot(table.column("t"), table.column("s_op"), label=_curve_label(table))
    ax.set_xlabel("t")
    ax.set_ylabel(r"$S_{\mathrm{op}}$")
    ax.legend()


_BUILDERS = {
    "norm-decay": lambda ax, tables: _draw_norm_like(ax, tables, ("circuit", "pure")),
    "lindblad-norm": lambda ax, tables: _draw_norm_like(ax, tables, ("lindblad",)),
    "l2-errors": lambda ax, tables: _draw_errors_like(ax, tables, ("circuit",)),
    "lindblad-errors": lambda ax, tables: _draw_errors_like(ax, tables, ("lindblad",)),
    "lambda-factor": _draw_lambda,
    "nscale": _draw_nscale,
    "sop": _draw_sop,
}


def _save_deterministic(fig, out_path: Path) -> None:
    suffix = out_path.suffix.lower()
    if suffix == ".png":
        metadata = {"Software": "mpofig"}
    elif suffix == ".svg":
        metadata = {"Date": None, "Creator": "mpofig"}
    elif suffix == ".pdf":
        metadata = {"CreationDate": None, "Creator": "mpofig", "Producer": "mpofig"}
    else:
        raise RecipeError(f"unsupported output format {suffix!r} (png, svg, pdf)")
    tmp = out_path.with_name(out_path.name + ".tmp")
    fig.savefig(tmp, format=suffix[1:], metadata=metadata)
    os.replace(tmp, out_path)


def render(recipe: FigureRecipe, out_path) -> Path:
    """Render one recipe to ``out_path``; returns the written path.

    All input validation runs before the figure is written, so no file
    appears on failure.

    Raises:
        SchemaError: On schema-version, kind, or column mismatches.
        DataError: On empty inputs or a bound-vs-measured violation.
        RecipeError: On an unsupported output format.
    """
    out_path = Path(out_path)
    tables = [load_table(p) for p in recipe.inputs]
    builder = _BUILDERS[recipe.figure]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        try:
            builder(ax, tables)
            if recipe.title:
                ax.set_title(recipe.title)
            fig.tight_layout()
            _save_deterministic(fig, out_path)
        finally:
            plt.close(fig)
    return out_path
