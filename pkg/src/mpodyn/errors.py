"""Exception types shared across the package.

Each class marks one failure family so the command-line driver can map
errors to distinct exit codes and machine-readable diagnostics.
"""


class ShapeError(ValueError):
    """Tensor arguments whose shapes or axes are inconsistent."""


class NumericError(ValueError):
    """Non-finite data or values outside their mathematical domain."""


class SvdBackendError(RuntimeError):
    """LAPACK failed to converge even after the fallback driver."""


class SizeGuardError(ValueError):
    """A dense-reference operation was requested beyond its size limit."""


class DegenerateTraceError(ValueError):
    """A state's trace or Schmidt weight vanished where it must not."""


class FitWindowError(ValueError):
    """A fit window is empty, too short, or not covered by the data."""


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""
