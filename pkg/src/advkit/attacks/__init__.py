"""The eleven attack algorithms behind a uniform dispatch interface.

Direct calls use each attack's natural signature; :func:`run_attack` gives
the benchmark harness one entry point taking ``(model, x, label, cfg)`` plus
an optional guide example (feature adversaries only).
"""

from advkit.attacks.config import AttackConfig, AttackResult, PerturbationNorms
from advkit.attacks.deepfool import deepfool
from advkit.attacks.feature import feature_adversaries
from advkit.attacks.gradient_sign import bim, fgsm, mim, pgd
from advkit.attacks.penalty import cw_l2, ead, lbfgs_attack
from advkit.attacks.saliency import jsma, saliency_map
from advkit.attacks.spsa import spsa_attack, spsa_gradient
from advkit.errors import ArgumentError

ATTACKS = (
    "fgsm",
    "bim",
    "pgd",
    "mim",
    "jsma",
    "deepfool",
    "cw_l2",
    "ead",
    "lbfgs_attack",
    "feature_adversaries",
    "spsa_attack",
)

TARGETED_ONLY = ("jsma", "cw_l2", "ead", "lbfgs_attack")

# per-attack overrides on top of the AttackConfig field defaults
_DEFAULTS = {
    "fgsm": {},
    "bim": {"iterations": 10, "step_size": 0.075},
    "pgd": {"iterations": 10, "step_size": 0.075},
    "mim": {"iterations": 10, "step_size": 0.075, "decay": 1.0},
    "jsma": {"max_features": 16},
    "deepfool": {"iterations": 50, "overshoot": 0.02},
    "cw_l2": {"iterations": 1000, "step_size": 0.01, "binary_search_steps": 9,
              "initial_c": 1e-3},
    "ead": {"iterations": 1000, "step_size": 0.01, "binary_search_steps": 9,
            "initial_c": 1e-3, "beta": 1e-3},
    "lbfgs_attack": {"iterations": 200, "binary_search_steps": 9,
                     "initial_c": 1e-3},
    "feature_adversaries": {"iterations": 100, "step_size": 0.01,
                            "delta_bound": 0.1},
    "spsa_attack": {"iterations": 100, "step_size": 0.01,
                    "spsa_samples": 128, "spsa_delta": 0.01},
}


def default_config(attack_name: str, **overrides) -> AttackConfig:
    """The documented default configuration for one attack."""
    if attack_name not in ATTACKS:
        raise ArgumentError(f"unknown attack {attack_name!r}")
    params = dict(_DEFAULTS[attack_name])
    params.update(overrides)
    return AttackConfig(**params)


def run_attack(attack_name: str, model, x, label, cfg: AttackConfig,
               guide=None) -> AttackResult:
    """Dispatch one attack by name with the uniform harness signature."""
    if attack_name not in ATTACKS:
        raise ArgumentError(f"unknown attack {attack_name!r}")
    if attack_name in TARGETED_ONLY and cfg.target is None:
        raise ArgumentError(f"{attack_name} requires cfg.target")
    if attack_name == "jsma":
        return jsma(model, x, cfg)
    if attack_name == "deepfool":
        return deepfool(model, x, label, cfg)
    if attack_name == "cw_l2":
        return cw_l2(model, x, cfg)
    if attack_name == "ead":
        return ead(model, x, cfg)
    if attack_name == "lbfgs_attack":
        return lbfgs_attack(model, x, cfg)
    if attack_name == "feature_adversaries":
        if guide is None:
            raise ArgumentError("feature_adversaries requires a guide example")
        return feature_adversaries(model, x, guide, cfg)
    fn = {"fgsm": fgsm, "bim": bim, "pgd": pgd, "mim": mim,
          "spsa_attack": spsa_attack}[attack_name]
    return fn(model, x, label, cfg)


__all__ = [
    "ATTACKS",
    "TARGETED_ONLY",
    "AttackConfig",
    "AttackResult",
    "PerturbationNorms",
    "bim",
    "cw_l2",
    "deepfool",
    "default_config",
    "ead",
    "feature_adversaries",
    "fgsm",
    "jsma",
    "lbfgs_attack",
    "mim",
    "pgd",
    "run_attack",
    "saliency_map",
    "spsa_attack",
    "spsa_gradient",
]
