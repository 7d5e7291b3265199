"""Small input-validation helpers used throughout the package.

These keep the estimator-facing surfaces sklearn-friendly: bad input raises
``ValidationError`` (a ``ValueError`` subclass) with a readable message.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError, ValidationError


def check_finite(arr: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(arr)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr


def check_ndim(arr: np.ndarray, ndim: int, name: str) -> np.ndarray:
    arr = np.asarray(arr)
    if arr.ndim != ndim:
        raise ShapeError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    return arr


def check_positive(value: float, name: str) -> float:
    if not value > 0:
        raise ValidationError(f"{name} must be positive, got {value!r}")
    return value


def check_in_range(value: float, lo: float, hi: float, name: str) -> float:
    if not (lo <= value <= hi):
        raise ValidationError(f"{name} must lie in [{lo}, {hi}], got {value!r}")
    return value


def check_divides(divisor: int, value: int, what: str) -> None:
    if value % divisor != 0:
        raise ShapeError(f"{what}: {value} is not divisible by {divisor}")
