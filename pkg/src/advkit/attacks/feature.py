"""Feature adversaries: match another input's internal representation."""

import numpy as np

from advkit.attacks.config import (
    AttackConfig,
    AttackResult,
    build_result,
    check_attack_input,
    clip_to_box,
)
from advkit.errors import ArgumentError
from advkit.numcore.classifier import Classifier, forward, loss_grad_input
from advkit.numcore.losses import LossKind
from advkit.numcore.validation import check_vector


def feature_adversaries(model: Classifier, x, guide, cfg: AttackConfig) -> AttackResult:
    """Signed-gradient descent on the squared distance between the hidden
    activations of the iterate and of ``guide`` at layer ``cfg.guide_layer``,
    constrained to ``||adv - x||_inf <= delta_bound`` and the box.

    Success means the final feature distance is strictly below the initial
    one.
    """
    x = check_attack_input(model, x, cfg)
    guide = check_vector(guide, model.input_dim, "guide")
    n_layers = len(model.layers)
    if not -n_layers <= cfg.guide_layer < n_layers:
        raise ArgumentError(
            f"guide_layer {cfg.guide_layer} out of range for {n_layers}-layer model"
        )
    layer = cfg.guide_layer % n_layers
    _, guide_hidden = forward(model, guide)
    loss = LossKind.feature_l2(layer, guide_hidden[layer])

    initial_value, _ = loss_grad_input(model, x, 0, loss)
    band_lo = x - cfg.delta_bound
    band_hi = x + cfg.delta_bound
    current = x.copy()
    queries = 1
    for _ in range(cfg.iterations):
        _, grad = loss_grad_input(model, current, 0, loss)
        queries += 1
        current = current - cfg.step_size * np.sign(grad)
        current = np.clip(current, band_lo, band_hi)
        current = clip_to_box(current, cfg)
    final_value, _ = loss_grad_input(model, current, 0, loss)
    queries += 1
    return build_result(
        x, current, final_value < initial_value, cfg.iterations, queries,
        extra={"initial_feature_distance_sq": initial_value,
               "final_feature_distance_sq": final_value},
    )
