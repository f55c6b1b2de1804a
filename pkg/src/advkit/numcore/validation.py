"""Input validation helpers.

All numeric data entering the toolkit passes through here: arrays are
coerced to contiguous float64 and rejected if they contain NaN/Inf, labels
are range-checked against the class count.
"""

import numpy as np

from advkit.errors import ArgumentError, DimensionError


def as_tensor(data, name: str = "array") -> np.ndarray:
    """Coerce ``data`` to a float64 ndarray, rejecting non-finite entries."""
    arr = np.asarray(data, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ArgumentError(f"{name} contains non-finite values")
    return arr


def check_vector(data, dim: int | None = None, name: str = "x") -> np.ndarray:
    """Validate a 1-D float64 vector, optionally of a fixed length."""
    arr = as_tensor(data, name)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"{name} has {arr.shape[0]} features, expected {dim}")
    return arr


def check_label(label, num_classes: int, name: str = "label") -> int:
    """Validate an integer class index in ``[0, num_classes)``."""
    idx = int(label)
    if idx != label:
        raise ArgumentError(f"{name} must be an integer class index, got {label!r}")
    if not 0 <= idx < num_classes:
        raise ArgumentError(f"{name} {idx} out of range [0, {num_classes})")
    return idx
