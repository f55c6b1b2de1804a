"""Untargeted minimal-perturbation attack via iterative hyperplane projection."""

import numpy as np

from advkit.attacks.config import (
    AttackConfig,
    AttackResult,
    build_result,
    check_attack_input,
    clip_to_box,
)
from advkit.errors import ArgumentError
from advkit.numcore.classifier import Classifier, logit_jacobian
from advkit.numcore.validation import check_label

_VANISHING_NORM = 1e-12


def deepfool(model: Classifier, x, label, cfg: AttackConfig) -> AttackResult:
    """Project the input across its nearest linearized decision boundary.

    At each step the candidate class minimizing |logit gap| / ||gradient
    gap|| among the ``num_classes_probe`` most likely classes is chosen and
    the iterate moves exactly onto that linearized hyperplane; the returned
    point overshoots the accumulated perturbation by ``1 + overshoot``.
    Gradient gaps below 1e-12 abort the attack with ``degraded=True``.
    """
    if cfg.target is not None:
        raise ArgumentError("deepfool is untargeted; cfg.target must be None")
    x = check_attack_input(model, x, cfg)
    label = check_label(label, model.num_classes)
    if model.predict(x) != label:
        return build_result(x, x.copy(), True, 0, 0)

    # candidate classes: most likely (by clean logit) after the original
    clean_logits = model.logits(x)
    ranked = [c for c in np.argsort(-clean_logits, kind="stable") if c != label]
    candidates = [int(c) for c in ranked[: cfg.num_classes_probe - 1]]
    if not candidates:
        return build_result(x, x.copy(), False, 0, 0)

    total = np.zeros_like(x)
    adv = x.copy()
    queries = 0
    for iteration in range(1, cfg.iterations + 1):
        point = x + total
        logits = model.logits(point)
        jac = logit_jacobian(model, point)
        queries += 2
        best = None
        for c in candidates:
            grad_gap = jac[c] - jac[label]
            norm = float(np.sqrt(grad_gap @ grad_gap))
            if norm < _VANISHING_NORM:
                continue
            gap = float(logits[c] - logits[label])
            ratio = abs(gap) / norm
            if best is None or ratio < best[0]:
                best = (ratio, gap, norm, grad_gap)
        if best is None:
            adv = clip_to_box(x + (1.0 + cfg.overshoot) * total, cfg)
            return build_result(x, adv, model.predict(adv) != label,
                                iteration - 1, queries, degraded=True)
        ratio, gap, norm, grad_gap = best
        total = total + (abs(gap) / (norm * norm)) * grad_gap
        adv = clip_to_box(x + (1.0 + cfg.overshoot) * total, cfg)
        if model.predict(adv) != label:
            return build_result(x, adv, True, iteration, queries)
    return build_result(x, adv, model.predict(adv) != label,
                        cfg.iterations, queries)
