"""Central finite-difference oracle.

Used throughout the test suite to validate the analytic gradients: central
differences with h=1e-5 in float64 balance truncation against rounding at
roughly 1e-10 absolute error.
"""

import numpy as np


def central_diff_gradient(fn, x, h: float = 1e-5) -> np.ndarray:
    """Gradient of scalar ``fn`` at ``x`` by central differences."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for i in range(x.size):
        bump = np.zeros_like(x)
        bump.flat[i] = h
        grad.flat[i] = (fn(x + bump) - fn(x - bump)) / (2.0 * h)
    return grad


def central_diff_jacobian(fn, x, h: float = 1e-5) -> np.ndarray:
    """Jacobian of vector-valued ``fn`` at ``x``, shape (len(fn(x)), len(x))."""
    x = np.asarray(x, dtype=np.float64)
    columns = []
    for i in range(x.size):
        bump = np.zeros_like(x)
        bump.flat[i] = h
        columns.append((fn(x + bump) - fn(x - bump)) / (2.0 * h))
    return np.stack(columns, axis=1)
