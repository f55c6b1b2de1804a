"""Dense tensor arithmetic, differentiable classifiers, and optimizers.

Tensors are plain numpy ``float64`` arrays validated by the helpers in
:mod:`advkit.numcore.validation`; all gradients are computed by manual
reverse-mode accumulation through the fixed layer vocabulary (affine +
relu/identity) and can be cross-checked against the central finite-difference
oracle in :mod:`advkit.numcore.fdiff`.
"""

from advkit.numcore.classifier import (
    Classifier,
    Layer,
    batch_loss_and_param_grads,
    forward,
    init_mlp,
    jacobian,
    load_weights,
    logit_jacobian,
    loss_grad_input,
    save_weights,
    weights_to_obj,
)
from advkit.numcore.fdiff import central_diff_gradient, central_diff_jacobian
from advkit.numcore.losses import LossKind, log_softmax, softmax
from advkit.numcore.optim import (
    AdamState,
    BoxLbfgsResult,
    adam_step,
    box_lbfgs_minimize,
    ista_shrink,
)
from advkit.numcore.validation import as_tensor, check_label, check_vector

__all__ = [
    "AdamState",
    "BoxLbfgsResult",
    "Classifier",
    "Layer",
    "LossKind",
    "adam_step",
    "as_tensor",
    "batch_loss_and_param_grads",
    "box_lbfgs_minimize",
    "central_diff_gradient",
    "central_diff_jacobian",
    "check_label",
    "check_vector",
    "forward",
    "init_mlp",
    "ista_shrink",
    "jacobian",
    "load_weights",
    "log_softmax",
    "logit_jacobian",
    "loss_grad_input",
    "save_weights",
    "softmax",
    "weights_to_obj",
]
