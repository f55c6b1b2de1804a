"""Adversarial-example toolkit: attacks, defenses, and reproducible benchmarks.

The package is organized in five layers:

* ``advkit.numcore`` -- dense float64 tensors (numpy), small differentiable
  classifiers with manual backpropagation, first-order optimizers, and a
  finite-difference oracle for gradient validation.
* ``advkit.attacks`` -- the eleven attack algorithms behind a uniform
  ``(model, x, label, config) -> AttackResult`` interface.
* ``advkit.defense`` -- plain and adversarial training loops.
* ``advkit.dataio`` -- synthetic blob datasets, IDX image ingestion, and
  JSON persistence.
* ``advkit.bench`` -- the ``bench`` command line harness emitting versioned,
  byte-reproducible robustness reports.
"""

__version__ = "1.0.0"

from advkit.attacks import ATTACKS, AttackConfig, AttackResult
from advkit.dataio import LabeledDataset, gen_blobs, load_idx
from advkit.defense import TrainConfig, adversarial_train, train
from advkit.numcore import Classifier, Layer, LossKind

__all__ = [
    "__version__",
    "ATTACKS",
    "AttackConfig",
    "AttackResult",
    "Classifier",
    "Layer",
    "LabeledDataset",
    "LossKind",
    "TrainConfig",
    "adversarial_train",
    "gen_blobs",
    "load_idx",
    "train",
]
