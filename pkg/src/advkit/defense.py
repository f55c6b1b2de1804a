"""Training loops: plain minibatch descent and adversarial training.

Adversarial training regenerates adversarial counterparts of every batch
against the current weights and descends the arithmetic mean of the clean
and adversarial cross-entropy losses; everything else matches the plain
loop, so an attack with eps=0 reproduces plain training bit for bit.
"""

from dataclasses import dataclass, field

import numpy as np

from advkit.attacks import ATTACKS, AttackConfig, run_attack
from advkit.errors import ArgumentError, TrainingDivergedError
from advkit.numcore.classifier import Classifier, batch_loss_and_param_grads
from advkit.numcore.optim import AdamState, adam_step
from advkit.rng import example_seed, make_generator

OPTIMIZERS = ("sgd", "adam")


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters.

    ``adversarial`` is None for plain training, or ``(attack_name, attack
    config)`` to mix adversarial examples into every batch.
    """

    epochs: int = 10
    batch_size: int = 32
    lr: float = 0.1
    optimizer: str = "sgd"
    adversarial: tuple[str, AttackConfig] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ArgumentError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ArgumentError("batch_size must be >= 1")
        if self.lr <= 0:
            raise ArgumentError("lr must be > 0")
        if self.optimizer not in OPTIMIZERS:
            raise ArgumentError(f"optimizer must be one of {OPTIMIZERS}")
        if self.adversarial is not None and self.adversarial[0] not in ATTACKS:
            raise ArgumentError(f"unknown attack {self.adversarial[0]!r}")


@dataclass
class TrainHistory:
    """Per-batch loss traces recorded during training."""

    batch_losses: list = field(default_factory=list)
    clean_losses: list = field(default_factory=list)
    adversarial_losses: list = field(default_factory=list)
    epoch_losses: list = field(default_factory=list)


def _check_data(model: Classifier, data):
    if len(data.labels) == 0:
        raise ArgumentError("training data must be nonempty")
    if data.inputs.shape[1] != model.input_dim:
        raise ArgumentError(
            f"dataset has {data.inputs.shape[1]} features, model expects "
            f"{model.input_dim}"
        )
    if int(np.max(data.labels)) >= model.num_classes:
        raise ArgumentError("dataset labels exceed the model's class count")


def train(model: Classifier, data, cfg: TrainConfig):
    """Minibatch training on cross-entropy; returns (model, history).

    The input model is left untouched; the seeded Philox stream drives the
    per-epoch shuffles so identical seeds give bit-identical weights.
    """
    return _run(model, data, cfg, adversarial=False)


def adversarial_train(model: Classifier, data, cfg: TrainConfig):
    """Training on the mean of clean and adversarial batch losses.

    Adversarial counterparts are regenerated for every batch against the
    current weights, using the configured attack with the true labels and a
    per-example seed (attack seed XOR dataset index).
    """
    if cfg.adversarial is None:
        raise ArgumentError("adversarial_train needs cfg.adversarial set")
    return _run(model, data, cfg, adversarial=True)


def _run(model: Classifier, data, cfg: TrainConfig, adversarial: bool):
    _check_data(model, data)
    work = model.copy()
    rng = make_generator(cfg.seed)
    history = TrainHistory()
    n = data.inputs.shape[0]
    adam_states = None
    if cfg.optimizer == "adam":
        adam_states = [
            (AdamState.initial(layer.weights.shape, lr=cfg.lr),
             AdamState.initial(layer.bias.shape, lr=cfg.lr))
            for layer in work.layers
        ]

    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        batch_count = 0
        for start in range(0, n, cfg.batch_size):
            batch_idx = order[start:start + cfg.batch_size]
            batch_x = data.inputs[batch_idx]
            batch_y = data.labels[batch_idx]

            if adversarial:
                attack_name, attack_cfg = cfg.adversarial
                adv_x = np.empty_like(batch_x)
                for row, dataset_index in enumerate(batch_idx):
                    per_example = attack_cfg.with_seed(
                        example_seed(attack_cfg.seed, int(dataset_index)))
                    outcome = run_attack(attack_name, work, batch_x[row],
                                         int(batch_y[row]), per_example)
                    adv_x[row] = outcome.adversarial
                clean_loss, clean_grads = batch_loss_and_param_grads(
                    work, batch_x, batch_y)
                adv_loss, adv_grads = batch_loss_and_param_grads(
                    work, adv_x, batch_y)
                loss = (clean_loss + adv_loss) / 2.0
                grads = [((gw + aw) / 2.0, (gb + ab) / 2.0)
                         for (gw, gb), (aw, ab) in zip(clean_grads, adv_grads)]
                history.clean_losses.append(clean_loss)
                history.adversarial_losses.append(adv_loss)
            else:
                loss, grads = batch_loss_and_param_grads(work, batch_x, batch_y)

            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, batch_count)
            history.batch_losses.append(loss)

            if cfg.optimizer == "sgd":
                for layer, (dw, db) in zip(work.layers, grads):
                    layer.weights -= cfg.lr * dw
                    layer.bias -= cfg.lr * db
            else:
                for k, (layer, (dw, db)) in enumerate(zip(work.layers, grads)):
                    w_state, b_state = adam_states[k]
                    w_state, layer.weights = adam_step(w_state, dw, layer.weights)
                    b_state, layer.bias = adam_step(b_state, db, layer.bias)
                    adam_states[k] = (w_state, b_state)

            epoch_loss += loss
            batch_count += 1
        history.epoch_losses.append(epoch_loss / batch_count)
    return work, history
