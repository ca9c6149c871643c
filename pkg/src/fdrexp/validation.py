"""Input validation helpers shared by procedures, estimators, and the CLI."""

from __future__ import annotations

import numpy as np

__all__ = [
    "check_p_values",
    "check_z_vector",
    "check_correlation_matrix",
    "check_open_unit",
]

# Tolerances for correlation-matrix invariants.
UNIT_DIAG_ATOL = 1e-9
ENTRY_RANGE_ATOL = 1e-9


def check_p_values(p, *, allow_empty: bool = False) -> np.ndarray:
    """Coerce to a 1-d float array of p-values in [0, 1]."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"p-values must be a 1-d vector, got shape {arr.shape}")
    if arr.size == 0 and not allow_empty:
        raise ValueError("p-value vector is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("p-values must be finite")
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError("p-values must lie in [0, 1]")
    return arr


def check_z_vector(z) -> np.ndarray:
    arr = np.asarray(z, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"z must be a 1-d vector, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("z vector is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("z entries must be finite")
    return arr


def check_correlation_matrix(sigma, *, n: int | None = None) -> np.ndarray:
    """Validate symmetry, unit diagonal, and [-1, 1] entries (with tolerance)."""
    arr = np.asarray(sigma, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"correlation matrix must be square, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValueError(
            f"correlation matrix side {arr.shape[0]} does not match vector length {n}"
        )
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise ValueError(f"correlation matrix has a non-finite row: index {bad[0]}")
    if np.abs(np.diag(arr) - 1.0).max() > UNIT_DIAG_ATOL:
        raise ValueError("correlation matrix diagonal must be 1")
    if np.abs(arr - arr.T).max() > UNIT_DIAG_ATOL:
        raise ValueError("correlation matrix must be symmetric")
    if np.abs(arr).max() > 1.0 + ENTRY_RANGE_ATOL:
        raise ValueError("correlation entries must lie in [-1, 1]")
    return arr


def check_open_unit(value: float, name: str, *, include_one: bool = False) -> float:
    """Validate a scalar in (0, 1) or (0, 1]."""
    v = float(value)
    hi_ok = v <= 1.0 if include_one else v < 1.0
    if not (0.0 < v and hi_ok):
        ival = "(0, 1]" if include_one else "(0, 1)"
        raise ValueError(f"{name} must be in {ival}, got {value!r}")
    return v
