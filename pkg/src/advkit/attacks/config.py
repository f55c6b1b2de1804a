"""Attack configuration and result records.

One :class:`AttackConfig` carries every tunable across all eleven attacks;
each algorithm reads the subset it cares about, and the benchmark harness
echoes the full record so no parameter is ever reported implicitly.
"""

from dataclasses import asdict, dataclass, field, replace

import numpy as np

from advkit.errors import ArgumentError
from advkit.numcore.classifier import Classifier
from advkit.numcore.validation import check_label, check_vector

DECISION_RULES = ("l1", "elastic_net")


@dataclass(frozen=True)
class AttackConfig:
    """Shared parameter record for all attacks.

    eps                  L-inf perturbation budget.
    step_size            per-iteration step (or optimizer learning rate).
    iterations           iteration count (per binary-search round where
                         applicable).
    target               target class for targeted attacks, None otherwise.
    confidence           required logit margin for margin-based success.
    initial_c            starting trade-off constant for penalty attacks.
    binary_search_steps  rounds of the modified binary search over c.
    beta                 L1 weight of the elastic-net attack.
    decision_rule        'l1' or 'elastic_net' candidate selection.
    decay                momentum decay factor.
    rand_init            random start inside the eps-ball (pgd).
    num_classes_probe    number of most-likely classes deepfool examines.
    overshoot            deepfool boundary-crossing factor.
    delta_bound          L-inf budget of feature adversaries.
    guide_layer          hidden layer targeted by feature adversaries.
    spsa_samples         random directions averaged per gradient estimate.
    spsa_delta           finite-difference probe size.
    max_features         feature budget of the saliency attack.
    clip_min, clip_max   valid input range.
    seed                 64-bit seed for every random choice in the attack.
    """

    eps: float = 0.3
    step_size: float = 0.01
    iterations: int = 10
    target: int | None = None
    confidence: float = 0.0
    initial_c: float = 1e-3
    binary_search_steps: int = 9
    beta: float = 1e-3
    decision_rule: str = "elastic_net"
    decay: float = 1.0
    rand_init: bool = True
    num_classes_probe: int = 10
    overshoot: float = 0.02
    delta_bound: float = 0.1
    guide_layer: int = 0
    spsa_samples: int = 128
    spsa_delta: float = 0.01
    max_features: int = 16
    clip_min: float = 0.0
    clip_max: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.clip_min < self.clip_max:
            raise ArgumentError("clip_min must be < clip_max")
        if self.eps < 0:
            raise ArgumentError("eps must be >= 0")
        if self.eps > self.clip_max - self.clip_min:
            raise ArgumentError("eps exceeds the input range")
        if self.step_size <= 0:
            raise ArgumentError("step_size must be > 0")
        if self.iterations < 0:
            raise ArgumentError("iterations must be >= 0")
        if self.confidence < 0:
            raise ArgumentError("confidence must be >= 0")
        if self.initial_c <= 0:
            raise ArgumentError("initial_c must be > 0")
        if self.binary_search_steps < 1:
            raise ArgumentError("binary_search_steps must be >= 1")
        if self.beta < 0:
            raise ArgumentError("beta must be >= 0")
        if self.decision_rule not in DECISION_RULES:
            raise ArgumentError(f"decision_rule must be one of {DECISION_RULES}")
        if self.decay < 0:
            raise ArgumentError("decay must be >= 0")
        if self.num_classes_probe < 2:
            raise ArgumentError("num_classes_probe must be >= 2")
        if self.overshoot < 0:
            raise ArgumentError("overshoot must be >= 0")
        if self.delta_bound < 0:
            raise ArgumentError("delta_bound must be >= 0")
        if self.spsa_samples < 1:
            raise ArgumentError("spsa_samples must be >= 1")
        if self.spsa_delta <= 0:
            raise ArgumentError("spsa_delta must be > 0")
        if self.max_features < 0:
            raise ArgumentError("max_features must be >= 0")

    def with_seed(self, seed: int) -> "AttackConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        """Complete, ordered field echo (for reports and comparisons)."""
        return asdict(self)


@dataclass(frozen=True)
class PerturbationNorms:
    l0: int
    l1: float
    l2: float
    linf: float

    @classmethod
    def of(cls, delta: np.ndarray) -> "PerturbationNorms":
        return cls(
            l0=int(np.count_nonzero(delta)),
            l1=float(np.sum(np.abs(delta))),
            l2=float(np.sqrt(np.sum(delta * delta))),
            linf=float(np.max(np.abs(delta))) if delta.size else 0.0,
        )


@dataclass
class AttackResult:
    """Outcome of one attack invocation.

    ``queries`` counts the model evaluations consumed while constructing the
    adversarial example (goal bookkeeping checks excluded); ``degraded``
    marks results cut short by a numerical guard.  ``extra`` carries
    attack-specific diagnostics such as recorded candidates.
    """

    adversarial: np.ndarray
    success: bool
    iterations_used: int
    norms: PerturbationNorms
    queries: int
    degraded: bool = False
    extra: dict = field(default_factory=dict)


def build_result(x: np.ndarray, adversarial: np.ndarray, success: bool,
                 iterations_used: int, queries: int, degraded: bool = False,
                 extra: dict | None = None) -> AttackResult:
    return AttackResult(
        adversarial=adversarial,
        success=bool(success),
        iterations_used=int(iterations_used),
        norms=PerturbationNorms.of(adversarial - x),
        queries=int(queries),
        degraded=degraded,
        extra=extra or {},
    )


def check_attack_input(model: Classifier, x, cfg: AttackConfig) -> np.ndarray:
    """Validate an attack input vector against the model and clip range."""
    x = check_vector(x, model.input_dim, "x")
    if np.any(x < cfg.clip_min) or np.any(x > cfg.clip_max):
        raise ArgumentError("x lies outside [clip_min, clip_max]")
    if cfg.target is not None:
        check_label(cfg.target, model.num_classes, "target")
    return x


def require_target(cfg: AttackConfig, model: Classifier) -> int:
    if cfg.target is None:
        raise ArgumentError("this attack requires cfg.target")
    return check_label(cfg.target, model.num_classes, "target")


def clip_to_box(values: np.ndarray, cfg: AttackConfig) -> np.ndarray:
    return np.clip(values, cfg.clip_min, cfg.clip_max)
