"""Saliency-map feature selection and the pairwise saliency attack."""

import numpy as np

from advkit.attacks.config import (
    AttackConfig,
    AttackResult,
    build_result,
    check_attack_input,
    require_target,
)
from advkit.errors import ArgumentError, DimensionError
from advkit.numcore.classifier import Classifier, jacobian
from advkit.numcore.validation import as_tensor


def saliency_map(jac, target: int) -> np.ndarray:
    """Per-feature saliency scores for pushing the prediction toward ``target``.

    A feature scores zero when the target-class derivative is negative or
    the summed other-class derivatives are positive; otherwise the score is
    the product of the target derivative and the magnitude of the summed
    other-class derivatives.
    """
    jac = as_tensor(jac, "jac")
    if jac.ndim != 2:
        raise DimensionError("jac must be 2-D (num_classes, input_dim)")
    if not 0 <= target < jac.shape[0]:
        raise ArgumentError(f"target {target} out of range [0, {jac.shape[0]})")
    target_row = jac[target]
    other_sum = jac.sum(axis=0) - target_row
    zero_branch = (target_row < 0.0) | (other_sum > 0.0)
    return np.where(zero_branch, 0.0, target_row * np.abs(other_sum))


def _best_pair(jac: np.ndarray, target: int, available: np.ndarray):
    """Exhaustively score admissible feature pairs; highest score wins,
    ties broken by the lexicographically lowest index pair."""
    candidates = np.flatnonzero(available)
    if candidates.size < 2:
        return None
    target_row = jac[target]
    other_sum = jac.sum(axis=0) - target_row
    first, second = np.triu_indices(candidates.size, k=1)
    i_idx = candidates[first]
    k_idx = candidates[second]
    alpha = target_row[i_idx] + target_row[k_idx]
    gamma = other_sum[i_idx] + other_sum[k_idx]
    admissible = (alpha > 0.0) & (gamma < 0.0)
    if not np.any(admissible):
        return None
    scores = np.where(admissible, -alpha * gamma, -np.inf)
    best = int(np.argmax(scores))  # first maximum = lowest (i, k) pair
    return int(i_idx[best]), int(k_idx[best])


def jsma(model: Classifier, x, cfg: AttackConfig) -> AttackResult:
    """Targeted pairwise saliency attack.

    Repeatedly recomputes the probability Jacobian, saturates the
    best-scoring admissible feature pair to ``clip_max``, and marks the pair
    unmodifiable, until the target class is reached or the feature budget
    (``max_features``) is exhausted.
    """
    x = check_attack_input(model, x, cfg)
    target = require_target(cfg, model)
    if model.predict(x) == target:
        return build_result(x, x.copy(), True, 0, 0)

    adv = x.copy()
    available = np.ones(x.shape[0], dtype=bool)
    perturbed = 0
    pairs_applied = 0
    queries = 0
    success = False
    while True:
        if perturbed + 2 > cfg.max_features:
            break
        jac = jacobian(model, adv)
        queries += 1
        pair = _best_pair(jac, target, available)
        if pair is None:
            break
        i, k = pair
        adv[i] = cfg.clip_max
        adv[k] = cfg.clip_max
        available[i] = False
        available[k] = False
        perturbed += 2
        pairs_applied += 1
        if model.predict(adv) == target:
            success = True
            break
    return build_result(x, adv, success, pairs_applied, queries,
                        extra={"features_marked": perturbed})
