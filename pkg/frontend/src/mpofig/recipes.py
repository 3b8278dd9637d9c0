"""Figure recipes: which figure to draw, from which CSV inputs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import RecipeError

FIGURE_IDS = (
    "norm-decay",
    "nscale",
    "l2-errors",
    "lambda-factor",
    "lindblad-norm",
    "lindblad-errors",
    "sop",
)

_ALLOWED_KEYS = {"figure", "inputs", "title"}


@dataclass(frozen=True)
class FigureRecipe:
    """One figure: id, resolved input CSV paths, optional title.

    Axis and scale choices are properties of the figure id (errors and
    norms draw on a log scale); recipes only select data.
    """

    figure: str
    inputs: tuple[str, ...]
    title: str | None = None

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            known = ", ".join(FIGURE_IDS)
            msg = f"unknown figure id {self.figure!r}; known ids: {known}"
            raise RecipeError(msg)
        if not self.inputs:
            raise RecipeError(f"figure {self.figure!r} lists no inputs")


def load_recipe(path) -> FigureRecipe:
    """Load a recipe from a JSON file.

    Input paths are resolved relative to the recipe file's directory, so a
    recipe can live next to the run artifacts it references.

    Raises:
        RecipeError: On unreadable JSON, unknown keys, or invalid fields.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RecipeError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise RecipeError(f"{path}: recipe must be a JSON object")
    unknown = sorted(set(payload) - _ALLOWED_KEYS)
    if unknown:
        msg = f"{path}: unknown recipe key(s): {', '.join(unknown)}"
        raise RecipeError(msg)
    for key in ("figure", "inputs"):
        if key not in payload:
            raise RecipeError(f"{path}: recipe lacks required key {key!r}")
    figure = payload["figure"]
    if not isinstance(figure, str):
        raise RecipeError(f"{path}: 'figure' must be a string")
    inputs = payload["inputs"]
    if not isinstance(inputs, list) or not all(isinstance(p, str) for p in inputs):
        raise RecipeError(f"{path}: 'inputs' must be a list of paths")
    title = payload.get("title")
    if title is not None and not isinstance(title, str):
        raise RecipeError(f"{path}: 'title' must be a string")
    resolved = tuple(str((path.parent / p).resolve()) for p in inputs)
    return FigureRecipe(figure=figure, inputs=resolved, title=title)
