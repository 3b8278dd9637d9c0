"""mpofig: figure regeneration from mpodyn CSV run artifacts."""

from .errors import DataError, MpofigError, RecipeError, SchemaError
from .figures import render
from .recipes import FIGURE_IDS, FigureRecipe, load_recipe
from .schema import CsvTable, load_table

__version__ = "0.1.0"

__all__ = [
    "CsvTable",
    "DataError",
    "FIGURE_IDS",
    "FigureRecipe",
    "MpofigError",
    "RecipeError",
    "SchemaError",
    "load_recipe",
    "load_table",
    "render",
    "__version__",
]
