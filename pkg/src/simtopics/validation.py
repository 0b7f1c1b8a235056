"""Input validation helpers shared by the estimator and the kernels."""

import numpy as np

from .errors import DimensionMismatchError, FormatError, ZeroVectorError


def as_float_matrix(x) -> np.ndarray:
    """Coerce array-like input to a C-contiguous float64 2-D array."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise FormatError(f"expected a 2-D array, got ndim={arr.ndim}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise FormatError(f"matrix must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FormatError("matrix contains non-finite values")
    return arr


def check_no_zero_rows(arr: np.ndarray) -> None:
    zero = np.flatnonzero(np.abs(arr).sum(axis=1) == 0)
    if zero.size:
        raise ZeroVectorError(f"row {zero[0]} is all-zero")


def check_width(arr: np.ndarray, expected: int, what: str = "input") -> None:
    if arr.shape[1] != expected:
        raise DimensionMismatchError(
            f"{what} has width {arr.shape[1]}, fitted geometry expects {expected}"
        )
