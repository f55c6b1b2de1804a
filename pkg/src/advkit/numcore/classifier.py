"""Small dense classifiers with manual reverse-mode differentiation.

A :class:`Classifier` is a chain of affine layers, each tagged with a
``relu`` or ``id`` activation; the last layer's (post-activation) output is
the logit vector.  Everything is float64 and fully deterministic: identical
inputs produce bit-identical outputs.

Gradients with respect to the *input* feed the attack algorithms; gradients
with respect to the *parameters* feed the training loops.  The relu
subgradient at exactly zero is taken to be zero.
"""

import json
from dataclasses import dataclass

import numpy as np

from advkit.errors import ArgumentError, DimensionError, FormatError
from advkit.numcore.losses import (
    LossKind,
    cross_entropy_at_logits,
    cw_margin_at_logits,
    softmax,
)
from advkit.numcore.validation import as_tensor, check_label, check_vector
from advkit.rng import make_generator
from advkit.serialize import dumps_canonical, format_real, write_atomic

ACTIVATIONS = ("relu", "id")


@dataclass
class Layer:
    """One affine transform: ``act(weights @ x + bias)``.

    ``weights`` has shape (out_dim, in_dim); ``bias`` has shape (out_dim,).
    """

    weights: np.ndarray
    bias: np.ndarray
    activation: str = "id"

    def __post_init__(self):
        self.weights = as_tensor(self.weights, "weights")
        self.bias = as_tensor(self.bias, "bias")
        if self.weights.ndim != 2:
            raise DimensionError("layer weights must be 2-D (out_dim, in_dim)")
        if self.bias.shape != (self.weights.shape[0],):
            raise DimensionError(
                f"bias shape {self.bias.shape} does not match "
                f"{self.weights.shape[0]} output units"
            )
        if self.activation not in ACTIVATIONS:
            raise ArgumentError(f"unknown activation {self.activation!r}")

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    def copy(self) -> "Layer":
        return Layer(self.weights.copy(), self.bias.copy(), self.activation)


def _apply_activation(name: str, pre: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(pre, 0.0)
    return pre


def _activation_gate(name: str, pre: np.ndarray) -> np.ndarray:
    # relu subgradient at 0 is 0, hence the strict inequality
    if name == "relu":
        return (pre > 0.0).astype(np.float64)
    return np.ones_like(pre)


class Classifier:
    """A fixed chain of :class:`Layer` objects ending in ``num_classes`` logits."""

    def __init__(self, layers):
        layers = list(layers)
        if not layers:
            raise ArgumentError("a classifier needs at least one layer")
        for k in range(1, len(layers)):
            if layers[k].in_dim != layers[k - 1].out_dim:
                raise DimensionError(
                    f"layer {k} expects {layers[k].in_dim} inputs but layer "
                    f"{k - 1} produces {layers[k - 1].out_dim}"
                )
        self.layers = layers

    @property
    def input_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def num_classes(self) -> int:
        return self.layers[-1].out_dim

    def copy(self) -> "Classifier":
        return Classifier([layer.copy() for layer in self.layers])

    def logits(self, x: np.ndarray) -> np.ndarray:
        return forward(self, x)[0]

    def probabilities(self, x: np.ndarray) -> np.ndarray:
        return softmax(self.logits(x))

    def predict(self, x: np.ndarray):
        """Argmax class for one example (int) or a batch (int array)."""
        z = self.logits(x)
        if z.ndim == 1:
            return int(np.argmax(z))
        return np.argmax(z, axis=1)


def forward(model: Classifier, x) -> tuple[np.ndarray, list[np.ndarray]]:
    """Evaluate the model; returns (logits, post-activation output per layer).

    ``x`` may be a single example of shape (input_dim,) or a batch of shape
    (batch, input_dim).
    """
    x = as_tensor(x, "x")
    if x.ndim not in (1, 2):
        raise DimensionError(f"x must be 1-D or 2-D, got shape {x.shape}")
    if x.shape[-1] != model.input_dim:
        raise DimensionError(
            f"x has {x.shape[-1]} features but layer 0 expects {model.input_dim}"
        )
    hidden: list[np.ndarray] = []
    act = x
    for layer in model.layers:
        pre = act @ layer.weights.T + layer.bias
        act = _apply_activation(layer.activation, pre)
        hidden.append(act)
    return hidden[-1], hidden


def _forward_cache(model: Classifier, x: np.ndarray):
    """Single-example forward keeping pre-activations for backprop."""
    pres: list[np.ndarray] = []
    posts: list[np.ndarray] = []
    act = x
    for layer in model.layers:
        pre = layer.weights @ act + layer.bias
        act = _apply_activation(layer.activation, pre)
        pres.append(pre)
        posts.append(act)
    return pres, posts


def _backprop_to_input(model: Classifier, pres, upstream: np.ndarray,
                       start_layer: int) -> np.ndarray:
    """Propagate d(loss)/d(post-activation of ``start_layer``) back to the input.

    ``upstream`` may be a vector or a stack of vectors (rows propagated
    independently, used for Jacobians).
    """
    grad = upstream
    for k in range(start_layer, -1, -1):
        layer = model.layers[k]
        grad = grad * _activation_gate(layer.activation, pres[k])
        grad = grad @ layer.weights
    return grad


def loss_grad_input(model: Classifier, x, label_or_target, loss: LossKind):
    """Loss value and its exact gradient with respect to the input.

    For ``feature_l2`` the class index is ignored; the loss compares the
    activations at ``loss.layer_index`` against ``loss.target_features``.
    """
    x = check_vector(x, model.input_dim, "x")
    pres, posts = _forward_cache(model, x)
    if loss.variant == "feature_l2":
        layer_index = loss.layer_index
        if not -len(posts) <= layer_index < len(posts):
            raise ArgumentError(
                f"layer index {layer_index} out of range for "
                f"{len(posts)}-layer model"
            )
        layer_index %= len(posts)
        if loss.target_features is None:
            raise ArgumentError("feature_l2 loss needs target_features")
        target = check_vector(loss.target_features,
                              posts[layer_index].shape[0], "target_features")
        diff = posts[layer_index] - target
        value = float(diff @ diff)
        grad = _backprop_to_input(model, pres, 2.0 * diff, layer_index)
        return value, grad

    label = check_label(label_or_target, model.num_classes)
    logits = posts[-1]
    if loss.variant == "cross_entropy":
        value, dz = cross_entropy_at_logits(logits, label)
    else:
        value, dz = cw_margin_at_logits(logits, label, loss.confidence,
                                        loss.targeted)
    grad = _backprop_to_input(model, pres, dz, len(model.layers) - 1)
    return float(value), grad


def jacobian(model: Classifier, x) -> np.ndarray:
    """Jacobian of the softmax class probabilities, shape (num_classes, input_dim).

    Row ``j`` is the gradient of p_j; rows therefore sum to zero across
    classes (softmax conservation).
    """
    x = check_vector(x, model.input_dim, "x")
    pres, posts = _forward_cache(model, x)
    probs = softmax(posts[-1])
    # d p_j / d z = p_j * (e_j - p), stacked for all j
    upstream = probs[:, None] * (np.eye(model.num_classes) - probs[None, :])
    return _backprop_to_input(model, pres, upstream, len(model.layers) - 1)


def logit_jacobian(model: Classifier, x) -> np.ndarray:
    """Jacobian of the raw logits, shape (num_classes, input_dim)."""
    x = check_vector(x, model.input_dim, "x")
    pres, _ = _forward_cache(model, x)
    upstream = np.eye(model.num_classes)
    return _backprop_to_input(model, pres, upstream, len(model.layers) - 1)


def batch_loss_and_param_grads(model: Classifier, inputs: np.ndarray,
                               labels: np.ndarray):
    """Mean cross-entropy over a batch plus parameter gradients.

    Returns ``(loss, grads)`` where ``grads[k]`` is ``(dW_k, db_k)``.
    """
    inputs = as_tensor(inputs, "inputs")
    if inputs.ndim != 2:
        raise DimensionError("batch inputs must be 2-D (batch, input_dim)")
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (inputs.shape[0],):
        raise DimensionError("labels must be 1-D with one entry per input row")
    if labels.size and (labels.min() < 0 or labels.max() >= model.num_classes):
        raise ArgumentError("label out of range")
    n = inputs.shape[0]
    pres = []
    posts = []
    act = inputs
    for layer in model.layers:
        pre = act @ layer.weights.T + layer.bias
        act = _apply_activation(layer.activation, pre)
        pres.append(pre)
        posts.append(act)
    logits = posts[-1]
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    logp = shifted - np.log(np.sum(np.exp(shifted), axis=1, keepdims=True))
    loss = float(-np.mean(logp[np.arange(n), labels]))

    dpost = np.exp(logp)
    dpost[np.arange(n), labels] -= 1.0
    dpost /= n
    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(model.layers)
    for k in range(len(model.layers) - 1, -1, -1):
        layer = model.layers[k]
        dpre = dpost * _activation_gate(layer.activation, pres[k])
        below = posts[k - 1] if k > 0 else inputs
        grads[k] = (dpre.T @ below, dpre.sum(axis=0))
        if k > 0:
            dpost = dpre @ layer.weights
    return loss, grads


def init_mlp(input_dim: int, hidden: list[int], num_classes: int,
             seed: int = 0, scale: float | None = None) -> Classifier:
    """Fresh relu MLP with Philox-seeded Gaussian weights and zero biases."""
    rng = make_generator(seed)
    dims = [input_dim] + list(hidden) + [num_classes]
    layers = []
    for k in range(len(dims) - 1):
        fan_in = dims[k]
        std = scale if scale is not None else 1.0 / np.sqrt(fan_in)
        w = rng.normal(0.0, std, size=(dims[k + 1], fan_in))
        b = np.zeros(dims[k + 1])
        activation = "relu" if k < len(dims) - 2 else "id"
        layers.append(Layer(w, b, activation))
    return Classifier(layers)


# -- weight persistence -------------------------------------------------------
#
# {"layers":[{"w":[[...]],"b":[...],"act":"relu"|"id"}]} with fixed field
# order and 17-significant-digit reals, so save/load round-trips bit-exactly.

def weights_to_obj(model: Classifier) -> dict:
    layers = []
    for layer in model.layers:
        layers.append({
            "w": [[_real(v) for v in row] for row in layer.weights],
            "b": [_real(v) for v in layer.bias],
            "act": "relu" if layer.activation == "relu" else "id",
        })
    return {"layers": layers}


def _real(v: float) -> float:
    # round-trip through the 17-digit rendering used on disk
    return float(format_real(float(v)))


def save_weights(model: Classifier, path: str) -> None:
    write_atomic(path, dumps_canonical(weights_to_obj(model), sort_keys=False) + "\n")


def load_weights(path: str) -> Classifier:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict) or "layers" not in obj:
        raise FormatError(f"{path}: missing 'layers' field")
    layers = []
    for k, spec in enumerate(obj["layers"]):
        for key in ("w", "b", "act"):
            if key not in spec:
                raise FormatError(f"{path}: layer {k} missing field {key!r}")
        act = {"relu": "relu", "id": "id"}.get(spec["act"])
        if act is None:
            raise FormatError(f"{path}: layer {k} has unknown activation {spec['act']!r}")
        layers.append(Layer(np.array(spec["w"], dtype=np.float64),
                            np.array(spec["b"], dtype=np.float64), act))
    return Classifier(layers)
