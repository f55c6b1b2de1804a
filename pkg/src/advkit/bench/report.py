"""Benchmark report record, canonical serialization, and comparability."""

import json
from dataclasses import dataclass, field

from advkit.bench.semver import SemVersion
from advkit.errors import FormatError
from advkit.serialize import dumps_canonical, write_atomic

TOOLKIT_NAME = "advkit"

# rendered into the citation line, keyed by attack
_SALIENT_PARAMS = {
    "fgsm": ("eps",),
    "bim": ("eps", "iterations"),
    "pgd": ("eps", "iterations"),
    "mim": ("eps", "iterations"),
    "spsa_attack": ("eps", "iterations"),
    "jsma": ("target", "max_features"),
    "deepfool": ("overshoot",),
    "cw_l2": ("target", "confidence"),
    "ead": ("target", "beta"),
    "lbfgs_attack": ("target",),
    "feature_adversaries": ("delta_bound",),
}


@dataclass
class BenchmarkReport:
    """One benchmark run: identity, full configuration echo, and outcomes.

    ``per_example`` holds the per-input outcomes the summary statistics are
    recomputable from.  ``wall_time_s`` is measured per run and therefore
    excluded from the canonical serialization, which must be byte-identical
    across repeated runs with the same seed.
    """

    toolkit_version: SemVersion
    attack_name: str
    attack_params: dict
    dataset_name: str
    model_id: str
    seed: int
    clean_accuracy: float
    adversarial_accuracy: float
    attack_success_rate: float
    mean_norms: dict
    citation_line: str
    preprocessing: str = ""
    wall_time_s: float = 0.0
    per_example: list = field(default_factory=list)


def param_summary(attack_name: str, params: dict) -> str:
    keys = _SALIENT_PARAMS.get(attack_name, ("eps",))
    parts = []
    for key in keys:
        value = params.get(key)
        if isinstance(value, float):
            value = format(value, "g")
        parts.append(f"{key} of {value}")
    return " and ".join(parts)


def citation_line(version: SemVersion, attack_name: str, params: dict,
                  adversarial_accuracy: float) -> str:
    return (
        f"We benchmarked the robustness of our method to adversarial attack "
        f"using v{version} of {TOOLKIT_NAME}. On a test set modified by "
        f"{attack_name} with {param_summary(attack_name, params)}, we "
        f"obtained a test set accuracy of {adversarial_accuracy * 100:.1f}%."
    )


def report_to_obj(report: BenchmarkReport) -> dict:
    return {
        "toolkit_version": str(report.toolkit_version),
        "attack_name": report.attack_name,
        "attack_params": dict(report.attack_params),
        "dataset_name": report.dataset_name,
        "model_id": report.model_id,
        "seed": int(report.seed),
        "clean_accuracy": float(report.clean_accuracy),
        "adversarial_accuracy": float(report.adversarial_accuracy),
        "attack_success_rate": float(report.attack_success_rate),
        "mean_norms": {k: float(v) for k, v in report.mean_norms.items()},
        "citation_line": report.citation_line,
        "preprocessing": report.preprocessing,
        "per_example": report.per_example,
    }


def save_report(report: BenchmarkReport, path: str) -> None:
    write_atomic(path, dumps_canonical(report_to_obj(report), sort_keys=True) + "\n")


def report_from_obj(obj: dict, source: str = "report") -> BenchmarkReport:
    for key in ("toolkit_version", "attack_name", "attack_params", "dataset_name"):
        if key not in obj:
            raise FormatError(f"{source}: missing field {key!r}")
    return BenchmarkReport(
        toolkit_version=SemVersion.parse(obj["toolkit_version"]),
        attack_name=obj["attack_name"],
        attack_params=dict(obj["attack_params"]),
        dataset_name=obj["dataset_name"],
        model_id=obj.get("model_id", ""),
        seed=int(obj.get("seed", 0)),
        clean_accuracy=float(obj.get("clean_accuracy", 0.0)),
        adversarial_accuracy=float(obj.get("adversarial_accuracy", 0.0)),
        attack_success_rate=float(obj.get("attack_success_rate", 0.0)),
        mean_norms=dict(obj.get("mean_norms", {})),
        citation_line=obj.get("citation_line", ""),
        preprocessing=obj.get("preprocessing", ""),
        per_example=list(obj.get("per_example", [])),
    )


def load_report(path: str) -> BenchmarkReport:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return report_from_obj(obj, source=path)


@dataclass(frozen=True)
class ComparisonVerdict:
    comparable: bool
    differences: tuple

    def describe(self) -> str:
        if self.comparable:
            return "comparable"
        return "not comparable: " + "; ".join(self.differences)


def compare_reports(a: BenchmarkReport, b: BenchmarkReport) -> ComparisonVerdict:
    """Comparable iff major versions, attack identity, full parameter echo,
    and dataset name all agree; the verdict lists every differing field."""
    differences: list[str] = []
    if a.toolkit_version.major != b.toolkit_version.major:
        differences.append(
            f"major version differs ({a.toolkit_version.major} vs "
            f"{b.toolkit_version.major})"
        )
    if a.attack_name != b.attack_name:
        differences.append(f"attack_name differs ({a.attack_name} vs {b.attack_name})")
    for key in sorted(set(a.attack_params) | set(b.attack_params)):
        left = a.attack_params.get(key)
        right = b.attack_params.get(key)
        if left != right:
            differences.append(f"attack_params.{key} differs ({left} vs {right})")
    if a.dataset_name != b.dataset_name:
        differences.append(
            f"dataset_name differs ({a.dataset_name} vs {b.dataset_name})")
    return ComparisonVerdict(not differences, tuple(differences))
