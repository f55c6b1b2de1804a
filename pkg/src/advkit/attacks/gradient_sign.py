"""Gradient-sign family: single-step, iterated, randomized, and momentum.

All four share the same step rule: move by ``step * sign(g)`` where ``g``
ascends the true-label cross-entropy (untargeted) or descends the
target-label cross-entropy (targeted), clipping every iterate back into the
eps-ball around the original input and into the valid box.
"""

import numpy as np

from advkit.attacks.config import (
    AttackConfig,
    AttackResult,
    build_result,
    check_attack_input,
    clip_to_box,
)
from advkit.numcore.classifier import Classifier, loss_grad_input
from advkit.numcore.losses import LossKind
from advkit.numcore.validation import check_label
from advkit.rng import make_generator

_CE = LossKind.cross_entropy()


def _goal_reached(model: Classifier, point: np.ndarray, label: int,
                  cfg: AttackConfig) -> bool:
    pred = model.predict(point)
    if cfg.target is not None:
        return pred == cfg.target
    return pred != label


def _effective_gradient(model: Classifier, point: np.ndarray, label: int,
                        cfg: AttackConfig) -> np.ndarray:
    """Cross-entropy gradient oriented so that +sign(g) is the attack step."""
    if cfg.target is not None:
        _, grad = loss_grad_input(model, point, cfg.target, _CE)
        return -grad
    _, grad = loss_grad_input(model, point, label, _CE)
    return grad


def fgsm(model: Classifier, x, label, cfg: AttackConfig) -> AttackResult:
    """Single signed-gradient step of size eps."""
    x = check_attack_input(model, x, cfg)
    label = check_label(label, model.num_classes)
    if _goal_reached(model, x, label, cfg):
        return build_result(x, x.copy(), True, 0, 0)
    grad = _effective_gradient(model, x, label, cfg)
    adv = clip_to_box(x + cfg.eps * np.sign(grad), cfg)
    return build_result(x, adv, _goal_reached(model, adv, label, cfg), 1, 1)


def _iterate_sign(model: Classifier, x, label, cfg: AttackConfig,
                  momentum: bool, random_start: bool) -> AttackResult:
    x = check_attack_input(model, x, cfg)
    label = check_label(label, model.num_classes)
    if _goal_reached(model, x, label, cfg):
        return build_result(x, x.copy(), True, 0, 0)

    ball_lo = x - cfg.eps
    ball_hi = x + cfg.eps
    current = x.copy()
    if random_start and cfg.rand_init:
        noise = make_generator(cfg.seed).uniform(-cfg.eps, cfg.eps, size=x.shape)
        current = clip_to_box(x + noise, cfg)

    velocity = np.zeros_like(x)
    queries = 0
    for _ in range(cfg.iterations):
        grad = _effective_gradient(model, current, label, cfg)
        queries += 1
        if momentum:
            l1 = float(np.sum(np.abs(grad)))
            velocity = cfg.decay * velocity
            if l1 > 0.0:
                velocity = velocity + grad / l1
            step_dir = np.sign(velocity)
        else:
            step_dir = np.sign(grad)
        current = current + cfg.step_size * step_dir
        current = np.clip(current, ball_lo, ball_hi)
        current = clip_to_box(current, cfg)

    success = _goal_reached(model, current, label, cfg)
    return build_result(x, current, success, cfg.iterations, queries)


def bim(model: Classifier, x, label, cfg: AttackConfig) -> AttackResult:
    """Iterated signed-gradient steps with per-step eps-ball clipping."""
    return _iterate_sign(model, x, label, cfg, momentum=False, random_start=False)


def pgd(model: Classifier, x, label, cfg: AttackConfig) -> AttackResult:
    """Same iteration as bim, optionally restarted from a random point in
    the eps-ball (uniform per coordinate, Philox-seeded)."""
    return _iterate_sign(model, x, label, cfg, momentum=False, random_start=True)


def mim(model: Classifier, x, label, cfg: AttackConfig) -> AttackResult:
    """Momentum variant: accumulates L1-normalized gradients into a velocity
    vector and steps along its sign.  Zero-gradient steps only decay the
    velocity (no division by zero)."""
    return _iterate_sign(model, x, label, cfg, momentum=True, random_start=False)
