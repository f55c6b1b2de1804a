"""First-order optimizers: Adam, projected-gradient L-BFGS, and the
elastic-net shrinkage-thresholding step.

All three are pure functions; the L-BFGS routine keeps every iterate inside
the requested box by projecting each trial point before evaluating the
objective.
"""

from collections import deque
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from advkit.errors import ArgumentError
from advkit.numcore.validation import as_tensor


@dataclass(frozen=True)
class AdamState:
    """Moment estimates for one optimized variable."""

    step: int
    first_moment: np.ndarray
    second_moment: np.ndarray
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps_stab: float = 1e-8

    @classmethod
    def initial(cls, shape, lr: float, beta1: float = 0.9, beta2: float = 0.999,
                eps_stab: float = 1e-8) -> "AdamState":
        return cls(0, np.zeros(shape), np.zeros(shape), lr, beta1, beta2, eps_stab)


def adam_step(state: AdamState, grad: np.ndarray, variable: np.ndarray):
    """One bias-corrected Adam update; returns (new state, new variable)."""
    grad = as_tensor(grad, "grad")
    variable = as_tensor(variable, "variable")
    if grad.shape != variable.shape or grad.shape != state.first_moment.shape:
        raise ArgumentError("adam_step shapes disagree")
    t = state.step + 1
    m = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad
    v = state.beta2 * state.second_moment + (1.0 - state.beta2) * grad * grad
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new_var = variable - state.lr * m_hat / (np.sqrt(v_hat) + state.eps_stab)
    return replace(state, step=t, first_moment=m, second_moment=v), new_var


class BoxLbfgsResult(NamedTuple):
    x: np.ndarray
    fun: float | None
    iterations: int
    degraded: bool


def _two_loop(grad, s_hist, y_hist):
    """Standard L-BFGS two-loop recursion: approximates H^-1 @ grad."""
    q = grad.copy()
    alphas = []
    rhos = []
    for s, y in zip(reversed(s_hist), reversed(y_hist)):
        rho = 1.0 / float(y @ s)
        alpha = rho * float(s @ q)
        q -= alpha * y
        alphas.append(alpha)
        rhos.append(rho)
    if s_hist:
        s_last, y_last = s_hist[-1], y_hist[-1]
        q *= float(s_last @ y_last) / float(y_last @ y_last)
    for (s, y), alpha, rho in zip(zip(s_hist, y_hist), reversed(alphas),
                                  reversed(rhos)):
        beta = rho * float(y @ q)
        q += s * (alpha - beta)
    return q


def box_lbfgs_minimize(objective: Callable, x0, lower: float, upper: float,
                       max_iter: int, memory: int = 10,
                       armijo: float = 1e-4, tol: float = 1e-12) -> BoxLbfgsResult:
    """Minimize ``objective`` over the box ``[lower, upper]^n``.

    ``objective(x)`` must return ``(value, gradient)``.  Trial points are
    projected onto the box before evaluation, so the objective only ever
    sees feasible iterates.  A non-finite objective value aborts the search,
    returning the last feasible iterate with ``degraded=True``.
    """
    if lower >= upper:
        raise ArgumentError("box_lbfgs_minimize requires lower < upper")
    x0 = as_tensor(x0, "x0")
    if np.any(x0 < lower) or np.any(x0 > upper):
        raise ArgumentError("x0 must lie inside the box")
    if max_iter == 0:
        return BoxLbfgsResult(x0.copy(), None, 0, False)

    x = x0.copy()
    value, grad = objective(x)
    if not np.isfinite(value):
        return BoxLbfgsResult(x, None, 0, True)
    s_hist: deque = deque(maxlen=memory)
    y_hist: deque = deque(maxlen=memory)

    iterations = 0
    for _ in range(max_iter):
        direction = -_two_loop(grad, list(s_hist), list(y_hist))
        if float(direction @ grad) >= 0.0:
            direction = -grad

        step = 1.0
        accepted = False
        for _ in range(40):
            trial = np.clip(x + step * direction, lower, upper)
            move = trial - x
            if not np.any(move):
                break
            trial_value, trial_grad = objective(trial)
            if not np.isfinite(trial_value):
                return BoxLbfgsResult(x, value, iterations, True)
            if trial_value <= value + armijo * float(grad @ move):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break

        iterations += 1
        s = trial - x
        y = trial_grad - grad
        if float(s @ y) > 1e-12:
            s_hist.append(s)
            y_hist.append(y)
        x, value, grad = trial, trial_value, trial_grad

        projected_grad = x - np.clip(x - grad, lower, upper)
        if float(np.max(np.abs(projected_grad))) <= tol:
            break
    return BoxLbfgsResult(x, value, iterations, False)


def ista_shrink(z, x0, beta: float, clip_min: float = 0.0,
                clip_max: float = 1.0) -> np.ndarray:
    """Elementwise shrinkage-thresholding against the reference point ``x0``.

    Deviations of at most ``beta`` are reset to the reference value; larger
    deviations are pulled back by ``beta`` and clipped into
    ``[clip_min, clip_max]``.
    """
    if beta < 0:
        raise ArgumentError("beta must be >= 0")
    z = as_tensor(z, "z")
    x0 = as_tensor(x0, "x0")
    if z.shape != x0.shape:
        raise ArgumentError("z and x0 must share a shape")
    diff = z - x0
    shrunk_up = np.minimum(z - beta, clip_max)
    shrunk_down = np.maximum(z + beta, clip_min)
    return np.where(diff > beta, shrunk_up,
                    np.where(diff < -beta, shrunk_down, x0))
