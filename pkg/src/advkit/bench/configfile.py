"""Benchmark configuration files.

Flat INI documents with four sections -- [model], [data], [attack],
[report].  Unknown sections or keys are hard errors so a typo can never
silently fall back to a default and distort a benchmark.

Example::

    [model]
    hidden = 16
    epochs = 20
    lr = 0.1
    seed = 7

    [data]
    source = blobs
    n_per_class = 50
    num_classes = 2
    input_dim = 2
    spread = 0.08
    seed = 3

    [attack]
    name = fgsm
    eps = 0.1

    [report]
    out = report.json
    seed = 0
"""

import configparser
import dataclasses
from dataclasses import dataclass

from advkit.attacks import ATTACKS, AttackConfig
from advkit.errors import ConfigError

_MODEL_KEYS = {
    "weights", "id", "hidden", "epochs", "batch_size", "lr", "optimizer",
    "seed", "adversarial", "save",
}
_DATA_KEYS = {
    "source", "name",
    # blobs
    "n_per_class", "num_classes", "input_dim", "spread", "seed",
    # idx
    "images", "labels", "limit",
    # json
    "path",
}
_REPORT_KEYS = {"out", "seed", "preprocessing", "expect_version.major"}

_ATTACK_FIELDS = {f.name: f.type for f in dataclasses.fields(AttackConfig)}

_BOOL_VALUES = {"true": True, "false": False, "1": True, "0": False,
                "yes": True, "no": False}


@dataclass
class BenchConfig:
    model: dict
    data: dict
    attack_name: str
    attack_params: dict
    report: dict


def _check_keys(section: str, present, allowed) -> None:
    unknown = sorted(set(present) - allowed)
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: {', '.join(unknown)}")


def _parse_bool(raw: str, key: str) -> bool:
    value = _BOOL_VALUES.get(raw.strip().lower())
    if value is None:
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    return value


def _convert(key: str, raw: str):
    """Convert an [attack] value to its AttackConfig field type."""
    annotation = str(_ATTACK_FIELDS[key])
    raw = raw.strip()
    if key == "target":
        return None if raw.lower() in ("none", "") else int(raw)
    if "bool" in annotation:
        return _parse_bool(raw, key)
    if "int" in annotation:
        return int(raw)
    if "float" in annotation:
        return float(raw)
    return raw


def parse_config(path: str) -> BenchConfig:
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")

    known_sections = {"model", "data", "attack", "report"}
    unknown_sections = sorted(set(parser.sections()) - known_sections)
    if unknown_sections:
        raise ConfigError(f"unknown section(s): {', '.join(unknown_sections)}")
    for section in ("model", "data", "attack"):
        if section not in parser:
            raise ConfigError(f"missing required section [{section}]")

    model = dict(parser["model"])
    _check_keys("model", model, _MODEL_KEYS)
    if ("weights" in model) == ("hidden" in model):
        raise ConfigError(
            "[model] must set exactly one of 'weights' (load) or "
            "'hidden' (training recipe; empty string for a linear model)")

    data = dict(parser["data"])
    _check_keys("data", data, _DATA_KEYS)
    if data.get("source") not in ("blobs", "idx", "json"):
        raise ConfigError("[data] source must be one of: blobs, idx, json")

    attack = dict(parser["attack"])
    if "name" not in attack:
        raise ConfigError("[attack] must set 'name'")
    attack_name = attack.pop("name").strip()
    if attack_name not in ATTACKS:
        raise ConfigError(f"unknown attack name {attack_name!r}")
    if "seed" in attack:
        raise ConfigError(
            "[attack] seed is derived from [report] seed; set it there")
    unknown = sorted(set(attack) - set(_ATTACK_FIELDS))
    if unknown:
        raise ConfigError(f"unknown key(s) in [attack]: {', '.join(unknown)}")
    try:
        attack_params = {key: _convert(key, raw) for key, raw in attack.items()}
    except ValueError as exc:
        raise ConfigError(f"[attack]: {exc}") from exc

    report = dict(parser["report"]) if "report" in parser else {}
    _check_keys("report", report, _REPORT_KEYS)

    return BenchConfig(model=model, data=data, attack_name=attack_name,
                       attack_params=attack_params, report=report)
