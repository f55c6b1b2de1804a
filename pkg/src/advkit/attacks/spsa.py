"""Gradient-free attack: simultaneous perturbation stochastic approximation.

The gradient of an arbitrary scalar score function is estimated from paired
evaluations along Rademacher directions; the attack runs Adam on that
estimate of the margin loss, projecting onto the eps-ball and the box after
every step.  Only forward evaluations of the model are used.
"""

import numpy as np

from advkit.attacks.config import (
    AttackConfig,
    AttackResult,
    build_result,
    check_attack_input,
    clip_to_box,
)
from advkit.errors import ArgumentError, EvaluationError
from advkit.numcore.classifier import Classifier
from advkit.numcore.losses import cw_margin_at_logits
from advkit.numcore.optim import AdamState, adam_step
from advkit.numcore.validation import as_tensor, check_label
from advkit.rng import make_generator


def spsa_gradient(scorefn, x, delta: float, samples: int, seed) -> np.ndarray:
    """Average of ``samples`` central-difference estimates along random
    Rademacher directions.

    ``seed`` may be an integer (a fresh Philox stream is created) or an
    existing ``numpy.random.Generator`` to draw from.  The estimate is
    deterministic given the seed.
    """
    if samples < 1:
        raise ArgumentError("samples must be >= 1")
    if delta <= 0:
        raise ArgumentError("delta must be > 0")
    x = as_tensor(x, "x")
    rng = seed if isinstance(seed, np.random.Generator) else make_generator(seed)
    total = np.zeros_like(x)
    for _ in range(samples):
        direction = rng.integers(0, 2, size=x.shape).astype(np.float64) * 2.0 - 1.0
        plus = float(scorefn(x + delta * direction))
        minus = float(scorefn(x - delta * direction))
        if not (np.isfinite(plus) and np.isfinite(minus)):
            raise EvaluationError("score function returned a non-finite value")
        total += (plus - minus) / (2.0 * delta) * direction
    return total / samples


def spsa_attack(model: Classifier, x, label, cfg: AttackConfig) -> AttackResult:
    """Adam on the SPSA estimate of the margin loss (targeted when
    ``cfg.target`` is set, untargeted otherwise).

    Consumes exactly ``iterations * spsa_samples * 2`` model evaluations;
    goal checks are not counted.
    """
    x = check_attack_input(model, x, cfg)
    label = check_label(label, model.num_classes)
    targeted = cfg.target is not None
    index = cfg.target if targeted else label

    def margin(point: np.ndarray) -> float:
        value, _ = cw_margin_at_logits(model.logits(point), index,
                                       cfg.confidence, targeted)
        return value

    if margin(x) <= 0.0:
        return build_result(x, x.copy(), True, 0, 0)

    queries = 0

    def score(point: np.ndarray) -> float:
        nonlocal queries
        queries += 1
        return margin(point)

    rng = make_generator(cfg.seed)
    ball_lo = x - cfg.eps
    ball_hi = x + cfg.eps
    current = x.copy()
    state = AdamState.initial(x.shape, lr=cfg.step_size)
    for _ in range(cfg.iterations):
        grad = spsa_gradient(score, current, cfg.spsa_delta, cfg.spsa_samples, rng)
        state, current = adam_step(state, grad, current)
        current = np.clip(current, ball_lo, ball_hi)
        current = clip_to_box(current, cfg)
    return build_result(x, current, margin(current) <= 0.0,
                        cfg.iterations, queries)
