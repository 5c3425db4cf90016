"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def as_float_array(value, name: str, ndim: int | None = None) -> np.ndarray:
    """Convert to a C-contiguous float64 array and optionally enforce ndim."""
    arr = np.ascontiguousarray(value, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got ndim={arr.ndim}")
    return arr


def check_finite(arr: np.ndarray, name: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_matrix(value, name: str, n_cols: int | None = None) -> np.ndarray:
    """Validate a 2-D finite float matrix, optionally with a fixed column count."""
    arr = as_float_array(value, name, ndim=2)
    check_finite(arr, name)
    if n_cols is not None and arr.shape[1] != n_cols:
        raise ValueError(
            f"{name} must have {n_cols} columns, got {arr.shape[1]} (dimension mismatch)"
        )
    return arr


def check_vector(value, name: str, length: int | None = None) -> np.ndarray:
    arr = as_float_array(value, name, ndim=1)
    check_finite(arr, name)
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {arr.shape[0]}")
    return arr


def check_scalar(value, name: str) -> float:
    x = float(value)
    if not np.isfinite(x):
        raise ValueError(f"{name} must be finite")
    return x


def check_in_unit_interval(value, name: str) -> float:
    x = check_scalar(value, name)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def check_bounds(value, name: str, n_dims: int | None = None) -> np.ndarray:
    """Validate a (d, 2) array of finite per-dimension bounds with lower < upper."""
    arr = as_float_array(value, name)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{name} must have shape (d, 2), got {arr.shape}")
    check_finite(arr, name)
    if n_dims is not None and arr.shape[0] != n_dims:
        raise ValueError(f"{name} must cover {n_dims} dimensions, got {arr.shape[0]}")
    if np.any(arr[:, 0] >= arr[:, 1]):
        raise ValueError(f"{name} requires lower < upper in every dimension")
    return arr


def readonly(arr: np.ndarray) -> np.ndarray:
    """Return the array with its write flag cleared (shared, not copied)."""
    arr.setflags(write=False)
    return arr
