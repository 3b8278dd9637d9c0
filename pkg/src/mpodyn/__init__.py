"""Matrix-product density-operator dynamics for noisy qubit chains.

The package evolves many-body density matrices, vectorized as matrix-product
states over four-dimensional doubled sites, under noisy brickwork circuits and
Trotterized Lindblad dynamics.  It tracks certified truncation errors, fits
norm-decay rates, and cross-checks everything against dense references for
small systems.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateTraceError,
    FitWindowError,
    NumericError,
    ShapeError,
    SizeGuardError,
    SvdBackendError,
)
from .state import DensityMPS, SchmidtSpectrum, TruncationReport
from .tensor_ops import SvdResult, contract, svd

__all__ = [
    "ConfigError",
    "DegenerateTraceError",
    "DensityMPS",
    "FitWindowError",
    "NumericError",
    "SchmidtSpectrum",
    "ShapeError",
    "SizeGuardError",
    "SvdBackendError",
    "SvdResult",
    "TruncationReport",
    "contract",
    "svd",
]
