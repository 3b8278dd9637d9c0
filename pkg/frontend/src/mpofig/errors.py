"""Error hierarchy of the figure renderer, with stable CLI exit codes."""

from __future__ import annotations


class MpofigError(Exception):
    """Base class for renderer failures."""

    exit_code = 1


class RecipeError(MpofigError):
    """Malformed or inconsistent figure recipe."""

    exit_code = 2


class SchemaError(MpofigError):
    """Input CSV does not match the expected schema or kind."""

    exit_code = 3


class DataError(MpofigError):
    """Input parses but its contents fail a pre-draw check."""

    exit_code = 4
