"""Input checks shared by the transform, the estimator and the CLI."""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import DomainError


def as_points(x, name="points") -> np.ndarray:
    """1-D finite float64 array (scalars and column vectors are accepted)."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    elif arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    return arr


def as_strengths(alpha, n, name="strengths") -> np.ndarray:
    arr = as_points(alpha, name)
    if arr.size != n:
        raise DomainError(f"{name} has length {arr.size}, expected {n}")
    return arr


def check_delta(delta) -> float:
    if isinstance(delta, bool) or not isinstance(delta, numbers.Real):
        raise DomainError(f"delta must be a real number, got {delta!r}")
    delta = float(delta)
    if not (np.isfinite(delta) and delta > 0):
        raise DomainError(f"delta must be positive and finite, got {delta!r}")
    return delta


def check_positive_int(v, name, minimum=1) -> int:
    if isinstance(v, bool) or not isinstance(v, numbers.Integral) or v < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {v!r}")
    return int(v)
