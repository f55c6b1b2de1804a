"""Benchmark execution: build the dataset and model, run one attack over
every example, and assemble the versioned report."""

import os
import time

import numpy as np

import advkit
from advkit.attacks import TARGETED_ONLY, default_config, run_attack
from advkit.bench.configfile import BenchConfig, parse_config
from advkit.bench.report import BenchmarkReport, citation_line, save_report
from advkit.bench.semver import SemVersion
from advkit.dataio import LabeledDataset, gen_blobs, load_dataset, load_idx
from advkit.defense import TrainConfig, adversarial_train, train
from advkit.errors import ArgumentError, ConfigError, VersionMismatchError
from advkit.numcore.classifier import Classifier, init_mlp, load_weights, save_weights
from advkit.rng import example_seed


def toolkit_version() -> SemVersion:
    return SemVersion.parse(advkit.__version__)


def _build_dataset(data_cfg: dict) -> LabeledDataset:
    source = data_cfg["source"]
    try:
        if source == "blobs":
            dataset = gen_blobs(
                n_per_class=int(data_cfg.get("n_per_class", 50)),
                num_classes=int(data_cfg.get("num_classes", 2)),
                input_dim=int(data_cfg.get("input_dim", 2)),
                spread=float(data_cfg.get("spread", 0.1)),
                seed=int(data_cfg.get("seed", 0)),
            )
        elif source == "idx":
            for key in ("images", "labels"):
                if key not in data_cfg:
                    raise ConfigError(f"[data] idx source needs '{key}'")
            limit = data_cfg.get("limit")
            dataset = load_idx(data_cfg["images"], data_cfg["labels"],
                               None if limit is None else int(limit))
        else:
            if "path" not in data_cfg:
                raise ConfigError("[data] json source needs 'path'")
            dataset = load_dataset(data_cfg["path"])
    except (ValueError, OSError) as exc:
        raise ConfigError(f"[data]: {exc}") from exc
    if "name" in data_cfg:
        dataset.name = data_cfg["name"]
    if len(dataset) == 0:
        raise ConfigError("[data]: dataset is empty")
    return dataset


def _parse_hidden(raw: str) -> list[int]:
    raw = raw.strip()
    if not raw:
        return []
    try:
        return [int(part) for part in raw.split(",")]
    except ValueError as exc:
        raise ConfigError(f"[model] hidden: {exc}") from exc


def _train_from_recipe(model_cfg: dict, dataset: LabeledDataset,
                       attack_name: str, attack_params: dict):
    hidden = _parse_hidden(model_cfg["hidden"])
    seed = int(model_cfg.get("seed", 0))
    model = init_mlp(dataset.input_dim, hidden, dataset.num_classes, seed=seed)
    adversarial = None
    if "adversarial" in model_cfg:
        adv_name = model_cfg["adversarial"].strip()
        adversarial = (adv_name,
                       default_config(adv_name, **attack_params, seed=seed))
    cfg = TrainConfig(
        epochs=int(model_cfg.get("epochs", 20)),
        batch_size=int(model_cfg.get("batch_size", 32)),
        lr=float(model_cfg.get("lr", 0.1)),
        optimizer=model_cfg.get("optimizer", "sgd"),
        adversarial=adversarial,
        seed=seed,
    )
    if adversarial is None:
        trained, _ = train(model, dataset, cfg)
    else:
        trained, _ = adversarial_train(model, dataset, cfg)
    model_id = model_cfg.get(
        "id", f"mlp-{'-'.join(map(str, hidden)) or 'linear'}-seed{seed}")
    return trained, model_id


def _build_model(model_cfg: dict, dataset: LabeledDataset,
                 attack_name: str, attack_params: dict):
    if "weights" in model_cfg:
        try:
            model = load_weights(model_cfg["weights"])
        except OSError as exc:
            raise ConfigError(f"[model]: {exc}") from exc
        model_id = model_cfg.get(
            "id", os.path.basename(model_cfg["weights"]))
        return model, model_id
    return _train_from_recipe(model_cfg, dataset, attack_name, attack_params)


def _find_guide(dataset: LabeledDataset, index: int) -> np.ndarray:
    """Deterministic guide for feature adversaries: the next example
    (cyclically) carrying a different label."""
    n = len(dataset)
    label = dataset.labels[index]
    for offset in range(1, n):
        j = (index + offset) % n
        if dataset.labels[j] != label:
            return dataset.inputs[j]
    raise ConfigError(
        "feature_adversaries needs a dataset with at least two classes")


def train_model(config_path: str) -> str:
    """``bench train``: fit the configured model and persist its weights."""
    cfg = parse_config(config_path)
    _check_expected_version(cfg)
    if "hidden" not in cfg.model:
        raise ConfigError("bench train needs a [model] training recipe")
    if "save" not in cfg.model:
        raise ConfigError("bench train needs [model] save = <weights path>")
    dataset = _build_dataset(cfg.data)
    model, _ = _train_from_recipe(cfg.model, dataset, cfg.attack_name,
                                  cfg.attack_params)
    save_weights(model, cfg.model["save"])
    return cfg.model["save"]


def _check_expected_version(cfg: BenchConfig) -> None:
    expected = cfg.report.get("expect_version.major")
    if expected is None:
        return
    actual = toolkit_version().major
    if int(expected) != actual:
        raise VersionMismatchError(
            f"config expects major version {expected}, toolkit is "
            f"{toolkit_version()}; results would not be comparable"
        )


def run_benchmark(config_path: str, seed_override: int | None = None,
                  out_override: str | None = None):
    """Run one configured attack over one dataset; returns
    ``(BenchmarkReport, output_path)`` after writing the canonical JSON."""
    cfg = parse_config(config_path)
    _check_expected_version(cfg)

    master_seed = (int(cfg.report.get("seed", 0))
                   if seed_override is None else int(seed_override))
    dataset = _build_dataset(cfg.data)
    model, model_id = _build_model(cfg.model, dataset, cfg.attack_name,
                                   cfg.attack_params)
    if model.input_dim != dataset.input_dim:
        raise ConfigError(
            f"model expects {model.input_dim} features, dataset has "
            f"{dataset.input_dim}")

    try:
        attack_cfg = default_config(cfg.attack_name, **cfg.attack_params,
                                    seed=master_seed)
    except (ArgumentError, TypeError) as exc:
        raise ConfigError(f"[attack]: {exc}") from exc
    if cfg.attack_name in TARGETED_ONLY and attack_cfg.target is None:
        raise ConfigError(f"[attack] {cfg.attack_name} requires 'target'")
    if cfg.attack_name == "deepfool" and attack_cfg.target is not None:
        raise ConfigError("[attack] deepfool is untargeted; remove 'target'")
    if (attack_cfg.clip_min > dataset.clip_min
            or attack_cfg.clip_max < dataset.clip_max):
        raise ConfigError(
            "[attack] clip range does not cover the dataset's value range")
    if attack_cfg.target is not None and attack_cfg.target >= model.num_classes:
        raise ConfigError("[attack] target out of range for the model")

    start = time.perf_counter()
    clean_preds = model.predict(dataset.inputs)
    targeted = attack_cfg.target is not None

    per_example = []
    norm_sums = {"l1": 0.0, "l2": 0.0, "linf": 0.0}
    adv_correct = 0
    initially_correct = 0
    benchmark_successes = 0
    for index in range(len(dataset)):
        x = dataset.inputs[index]
        label = int(dataset.labels[index])
        per_cfg = attack_cfg.with_seed(example_seed(master_seed, index))
        guide = (_find_guide(dataset, index)
                 if cfg.attack_name == "feature_adversaries" else None)
        outcome = run_attack(cfg.attack_name, model, x, label, per_cfg,
                             guide=guide)
        adv_pred = model.predict(outcome.adversarial)
        clean_pred = int(clean_preds[index])
        was_correct = clean_pred == label
        if targeted:
            benchmark_success = was_correct and adv_pred == attack_cfg.target
        else:
            benchmark_success = was_correct and adv_pred != label
        adv_correct += int(adv_pred == label)
        initially_correct += int(was_correct)
        benchmark_successes += int(benchmark_success)
        norm_sums["l1"] += outcome.norms.l1
        norm_sums["l2"] += outcome.norms.l2
        norm_sums["linf"] += outcome.norms.linf
        per_example.append({
            "index": index,
            "label": label,
            "clean_pred": clean_pred,
            "adv_pred": int(adv_pred),
            "success": benchmark_success,
            "attack_reported_success": outcome.success,
            "iterations_used": outcome.iterations_used,
            "queries": outcome.queries,
            "l0": outcome.norms.l0,
            "l1": outcome.norms.l1,
            "l2": outcome.norms.l2,
            "linf": outcome.norms.linf,
        })
    wall = time.perf_counter() - start

    n = len(dataset)
    clean_accuracy = initially_correct / n
    adversarial_accuracy = adv_correct / n
    attack_success_rate = (benchmark_successes / initially_correct
                           if initially_correct else 0.0)
    params_echo = attack_cfg.to_dict()
    version = toolkit_version()
    report = BenchmarkReport(
        toolkit_version=version,
        attack_name=cfg.attack_name,
        attack_params=params_echo,
        dataset_name=dataset.name,
        model_id=model_id,
        seed=master_seed,
        clean_accuracy=clean_accuracy,
        adversarial_accuracy=adversarial_accuracy,
        attack_success_rate=attack_success_rate,
        mean_norms={key: value / n for key, value in norm_sums.items()},
        citation_line=citation_line(version, cfg.attack_name, params_echo,
                                    adversarial_accuracy),
        preprocessing=cfg.report.get("preprocessing", ""),
        wall_time_s=wall,
        per_example=per_example,
    )
    out_path = out_override or cfg.report.get("out", "report.json")
    save_report(report, out_path)
    return report, out_path
