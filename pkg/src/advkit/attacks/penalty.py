"""Penalty-formulation attacks: distance + c * classification penalty.

Three attacks share the modified binary search over the trade-off constant
``c`` (grow by 10x until the first success, then bisect between the known
bounds):

* ``cw_l2``   -- Adam in tanh space; the change of variables keeps every
  iterate strictly inside the box.
* ``ead``     -- plain gradient steps on the smooth part followed by the
  shrinkage-thresholding projection, which handles the L1 term and the box.
* ``lbfgs_attack`` -- cross-entropy penalty minimized by the projected
  L-BFGS routine.
"""

import numpy as np

from advkit.attacks.config import (
    AttackConfig,
    AttackResult,
    build_result,
    check_attack_input,
    require_target,
)
from advkit.numcore.classifier import Classifier, loss_grad_input
from advkit.numcore.losses import LossKind, cw_margin_at_logits
from advkit.numcore.optim import AdamState, adam_step, box_lbfgs_minimize, ista_shrink


def _margin(model: Classifier, point: np.ndarray, target: int,
            confidence: float) -> float:
    value, _ = cw_margin_at_logits(model.logits(point), target, confidence)
    return value


def _binary_search_c(run_once, initial_c: float, steps: int):
    """Modified binary search over the penalty constant.

    ``run_once(c)`` returns ``(candidate_or_None, last_iterate)``; a
    candidate is a ``(score, point)`` tuple.  Returns the best candidate
    across rounds plus the final round's iterate for best-effort failures.
    """
    lower = 0.0
    upper = None
    c = initial_c
    best = None
    last = None
    for _ in range(steps):
        candidate, last = run_once(c)
        if candidate is not None:
            if best is None or candidate[0] < best[0]:
                best = candidate
            upper = c
            c = (c + lower) / 2.0
        else:
            lower = c
            c = c * 10.0 if upper is None else (c + upper) / 2.0
    return best, last


def cw_l2(model: Classifier, x, cfg: AttackConfig) -> AttackResult:
    """Targeted minimal-L2 attack via Adam on the tanh reparameterization."""
    x = check_attack_input(model, x, cfg)
    target = require_target(cfg, model)
    if _margin(model, x, target, cfg.confidence) <= 0.0:
        return build_result(x, x.copy(), True, 0, 0)

    span = cfg.clip_max - cfg.clip_min
    loss = LossKind.cw_margin(cfg.confidence)
    w0 = tanh_space(x, cfg.clip_min, cfg.clip_max)
    queries = 0
    steps_taken = 0

    def run_once(c: float):
        nonlocal queries, steps_taken
        w = w0.copy()
        state = AdamState.initial(w.shape, lr=cfg.step_size)
        best_local = None

        def consider(point: np.ndarray, margin_value: float):
            nonlocal best_local
            if margin_value <= 0.0:
                delta = point - x
                l2sq = float(delta @ delta)
                if best_local is None or l2sq < best_local[0]:
                    best_local = (l2sq, point.copy())

        point = from_tanh_space(w, cfg.clip_min, cfg.clip_max)
        for _ in range(cfg.iterations):
            margin_value, margin_grad = loss_grad_input(model, point, target, loss)
            queries += 1
            consider(point, margin_value)
            grad_point = 2.0 * (point - x) + c * margin_grad
            grad_w = grad_point * (span / 2.0) * (1.0 - np.tanh(w) ** 2)
            state, w = adam_step(state, grad_w, w)
            steps_taken += 1
            point = from_tanh_space(w, cfg.clip_min, cfg.clip_max)
        queries += 1
        consider(point, _margin(model, point, target, cfg.confidence))
        return best_local, point

    best, last = _binary_search_c(run_once, cfg.initial_c, cfg.binary_search_steps)
    if best is None:
        return build_result(x, last, False, steps_taken, queries)
    return build_result(x, best[1], True, steps_taken, queries)


def tanh_space(point: np.ndarray, clip_min: float, clip_max: float) -> np.ndarray:
    """Map a box point to the unconstrained tanh pre-image (arctanh)."""
    span = clip_max - clip_min
    unit = 2.0 * (point - clip_min) / span - 1.0
    return np.arctanh(np.clip(unit, -1.0 + 1e-12, 1.0 - 1e-12))


def from_tanh_space(w: np.ndarray, clip_min: float, clip_max: float) -> np.ndarray:
    span = clip_max - clip_min
    return clip_min + span * (np.tanh(w) + 1.0) / 2.0


def _distortion(delta: np.ndarray, beta: float, rule: str) -> float:
    l1 = float(np.sum(np.abs(delta)))
    if rule == "l1":
        return l1
    return float(delta @ delta) + beta * l1


def ead(model: Classifier, x, cfg: AttackConfig) -> AttackResult:
    """Elastic-net attack: shrinkage-thresholding after each gradient step.

    Candidates are ranked by ``decision_rule`` (pure L1 or the elastic-net
    combination); the recorded candidate set is exposed under
    ``extra["candidates"]``.
    """
    x = check_attack_input(model, x, cfg)
    target = require_target(cfg, model)
    if _margin(model, x, target, cfg.confidence) <= 0.0:
        return build_result(x, x.copy(), True, 0, 0)

    loss = LossKind.cw_margin(cfg.confidence)
    queries = 0
    steps_taken = 0
    candidates: list[dict] = []

    def run_once(c: float):
        nonlocal queries, steps_taken
        adv = x.copy()
        best_local = None

        def consider(point: np.ndarray, margin_value: float):
            nonlocal best_local
            if margin_value <= 0.0:
                delta = point - x
                entry = {
                    "point": point.copy(),
                    "l1": float(np.sum(np.abs(delta))),
                    "l2sq": float(delta @ delta),
                }
                candidates.append(entry)
                score = _distortion(delta, cfg.beta, cfg.decision_rule)
                if best_local is None or score < best_local[0]:
                    best_local = (score, point.copy())

        for _ in range(cfg.iterations):
            margin_value, margin_grad = loss_grad_input(model, adv, target, loss)
            queries += 1
            consider(adv, margin_value)
            smooth_grad = 2.0 * (adv - x) + c * margin_grad
            adv = ista_shrink(adv - cfg.step_size * smooth_grad, x, cfg.beta,
                              cfg.clip_min, cfg.clip_max)
            steps_taken += 1
        queries += 1
        consider(adv, _margin(model, adv, target, cfg.confidence))
        return best_local, adv

    best, last = _binary_search_c(run_once, cfg.initial_c, cfg.binary_search_steps)
    extra = {"candidates": candidates, "final_iterate": last}
    if best is None:
        return build_result(x, last, False, steps_taken, queries, extra=extra)
    return build_result(x, best[1], True, steps_taken, queries, extra=extra)


def lbfgs_attack(model: Classifier, x, cfg: AttackConfig) -> AttackResult:
    """Szegedy-style attack: L2 distance + c * target cross-entropy, solved
    by projected L-BFGS inside the box; c found by the shared binary search."""
    x = check_attack_input(model, x, cfg)
    target = require_target(cfg, model)
    if model.predict(x) == target:
        return build_result(x, x.copy(), True, 0, 0)

    ce = LossKind.cross_entropy()
    queries = 0
    iterations_total = 0

    def run_once(c: float):
        nonlocal queries, iterations_total

        def objective(point: np.ndarray):
            nonlocal queries
            queries += 1
            ce_value, ce_grad = loss_grad_input(model, point, target, ce)
            delta = point - x
            return float(delta @ delta) + c * ce_value, 2.0 * delta + c * ce_grad

        outcome = box_lbfgs_minimize(objective, x, cfg.clip_min, cfg.clip_max,
                                     max_iter=cfg.iterations)
        iterations_total += outcome.iterations
        if model.predict(outcome.x) == target:
            delta = outcome.x - x
            return (float(delta @ delta), outcome.x), outcome.x
        return None, outcome.x

    best, last = _binary_search_c(run_once, cfg.initial_c, cfg.binary_search_steps)
    if best is None:
        return build_result(x, last, False, iterations_total, queries)
    return build_result(x, best[1], True, iterations_total, queries)
