"""Loss functions expressed at the logit level.

Three loss kinds are supported:

* ``cross_entropy`` -- negative log-likelihood of one class under softmax.
* ``cw_margin`` -- hinge on the logit gap, floored at ``-confidence``.
  In the targeted form the value is <= 0 exactly when the target class
  beats every other logit by at least the confidence margin; the untargeted
  form mirrors it with the true class in the losing role.
* ``feature_l2`` -- squared euclidean distance between one hidden layer's
  activations and a fixed reference vector (used by feature adversaries).
"""

from dataclasses import dataclass

import numpy as np


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


def log_softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - np.max(z, axis=-1, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))


@dataclass(frozen=True, eq=False)
class LossKind:
    """Tagged loss selector passed to gradient routines.

    ``confidence`` and ``targeted`` apply to ``cw_margin``; ``layer_index``
    and ``target_features`` apply to ``feature_l2``.
    """

    variant: str
    confidence: float = 0.0
    targeted: bool = True
    layer_index: int = 0
    target_features: np.ndarray | None = None

    VARIANTS = ("cross_entropy", "cw_margin", "feature_l2")

    def __post_init__(self):
        if self.variant not in self.VARIANTS:
            raise ValueError(f"unknown loss variant {self.variant!r}")
        if self.confidence < 0:
            raise ValueError("confidence must be >= 0")

    @classmethod
    def cross_entropy(cls) -> "LossKind":
        return cls("cross_entropy")

    @classmethod
    def cw_margin(cls, confidence: float = 0.0, targeted: bool = True) -> "LossKind":
        return cls("cw_margin", confidence=confidence, targeted=targeted)

    @classmethod
    def feature_l2(cls, layer_index: int, target_features) -> "LossKind":
        return cls(
            "feature_l2",
            layer_index=layer_index,
            target_features=np.asarray(target_features, dtype=np.float64),
        )


def cross_entropy_at_logits(logits: np.ndarray, label: int):
    """Return (loss value, gradient of the loss w.r.t. the logits)."""
    logp = log_softmax(logits)
    grad = softmax(logits)
    grad[label] -= 1.0
    return -logp[label], grad


def cw_margin_at_logits(logits: np.ndarray, index: int, confidence: float,
                        targeted: bool = True):
    """Hinge on the logit gap; ``index`` is the target (or true) class.

    Targeted:   max(max_{j != t} z_j - z_t + confidence, 0)
    Untargeted: max(z_y - max_{j != y} z_j + confidence, 0)

    The value is exactly 0 when the adversarial goal holds with at least the
    confidence margin, and strictly positive otherwise.
    """
    if logits.size < 2:
        raise ValueError("cw margin needs at least two classes")
    others = np.delete(logits, index)
    top_other = int(np.argmax(others))
    # map back to an index in the full logit vector
    if top_other >= index:
        top_other += 1
    gap = logits[top_other] - logits[index]
    if not targeted:
        gap = -gap
    value = max(gap + confidence, 0.0)
    grad = np.zeros_like(logits)
    if gap + confidence > 0.0:
        sign = 1.0 if targeted else -1.0
        grad[top_other] = sign
        grad[index] = -sign
    return value, grad
