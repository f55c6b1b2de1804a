"""Datasets: synthetic Gaussian blobs, IDX image ingestion, JSON persistence.

IDX is the big-endian binary format used for small image benchmarks: magic
0x00000803 + (count, rows, cols) for images, magic 0x00000801 + count for
labels, then raw unsigned bytes.  Pixels map to [0, 1] by division by 255.
"""

import json
import struct
from dataclasses import dataclass

import numpy as np

from advkit.errors import ArgumentError, FormatError
from advkit.rng import make_generator
from advkit.serialize import dumps_canonical, format_real, write_atomic

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


@dataclass
class LabeledDataset:
    """Immutable-by-convention dataset: inputs (n, d) in [clip_min, clip_max]."""

    name: str
    inputs: np.ndarray
    labels: np.ndarray
    num_classes: int
    clip_min: float = 0.0
    clip_max: float = 1.0

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.inputs.ndim != 2:
            raise ArgumentError("inputs must be 2-D (n, input_dim)")
        if self.labels.shape != (self.inputs.shape[0],):
            raise ArgumentError("labels must be 1-D with one entry per row")
        if not np.all(np.isfinite(self.inputs)):
            raise ArgumentError("inputs contain non-finite values")
        if self.inputs.size and (np.any(self.inputs < self.clip_min)
                                 or np.any(self.inputs > self.clip_max)):
            raise ArgumentError("inputs outside [clip_min, clip_max]")
        if self.labels.size and (self.labels.min() < 0
                                 or self.labels.max() >= self.num_classes):
            raise ArgumentError("labels outside [0, num_classes)")

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def input_dim(self) -> int:
        return self.inputs.shape[1]


def _blob_centers(num_classes: int, input_dim: int) -> np.ndarray:
    """Deterministic centers: one-hot axes, shifted outward on each wrap."""
    centers = np.zeros((num_classes, input_dim))
    for c in range(num_classes):
        centers[c, c % input_dim] = 1.0 + c // input_dim
    return centers


def gen_blobs(n_per_class: int, num_classes: int, input_dim: int,
              spread: float, seed: int) -> LabeledDataset:
    """Gaussian blobs at deterministic centers, min-max rescaled into [0, 1].

    The rescale is a single global affine map (one min, one max over the
    whole array), so shrinking ``spread`` collapses every point onto its
    rescaled class center.
    """
    if n_per_class <= 0 or num_classes <= 0 or input_dim <= 0:
        raise ArgumentError("counts must be positive")
    if spread <= 0:
        raise ArgumentError("spread must be > 0")
    rng = make_generator(seed)
    centers = _blob_centers(num_classes, input_dim)
    inputs = np.vstack([
        centers[c] + rng.normal(0.0, spread, size=(n_per_class, input_dim))
        for c in range(num_classes)
    ])
    labels = np.repeat(np.arange(num_classes), n_per_class)
    low = float(inputs.min())
    high = float(inputs.max())
    span = max(high - low, 1e-300)
    inputs = np.clip((inputs - low) / span, 0.0, 1.0)
    return LabeledDataset(
        name=f"blobs-c{num_classes}-d{input_dim}-n{n_per_class}-s{seed}",
        inputs=inputs,
        labels=labels,
        num_classes=num_classes,
    )


def _read_exact(handle, count: int, path: str, what: str) -> bytes:
    offset = handle.tell()
    chunk = handle.read(count)
    if len(chunk) != count:
        raise FormatError(
            f"{path}: truncated while reading {what} at offset {offset} "
            f"(wanted {count} bytes, got {len(chunk)})"
        )
    return chunk


def load_idx(images_path: str, labels_path: str,
             limit: int | None = None) -> LabeledDataset:
    """Load an IDX image/label file pair (row-major, pixels scaled to [0,1])."""
    with open(images_path, "rb") as handle:
        magic, = struct.unpack(">I", _read_exact(handle, 4, images_path, "magic"))
        if magic != IMAGES_MAGIC:
            raise FormatError(
                f"{images_path}: bad magic 0x{magic:08x} at offset 0 "
                f"(expected 0x{IMAGES_MAGIC:08x})"
            )
        count, rows, cols = struct.unpack(
            ">III", _read_exact(handle, 12, images_path, "dimensions"))
        take = count if limit is None else min(limit, count)
        pixels = np.frombuffer(
            _read_exact(handle, take * rows * cols, images_path, "pixels"),
            dtype=np.uint8)

    with open(labels_path, "rb") as handle:
        magic, = struct.unpack(">I", _read_exact(handle, 4, labels_path, "magic"))
        if magic != LABELS_MAGIC:
            raise FormatError(
                f"{labels_path}: bad magic 0x{magic:08x} at offset 0 "
                f"(expected 0x{LABELS_MAGIC:08x})"
            )
        label_count, = struct.unpack(
            ">I", _read_exact(handle, 4, labels_path, "count"))
        if label_count != count:
            raise FormatError(
                f"{labels_path}: {label_count} labels but {images_path} has "
                f"{count} images"
            )
        labels = np.frombuffer(
            _read_exact(handle, take, labels_path, "labels"), dtype=np.uint8)

    inputs = pixels.reshape(take, rows * cols).astype(np.float64) / 255.0
    labels = labels.astype(np.int64)
    num_classes = int(labels.max()) + 1 if take else 1
    return LabeledDataset(
        name=f"idx-{take}x{rows}x{cols}",
        inputs=inputs,
        labels=labels,
        num_classes=num_classes,
    )


# -- canonical dataset JSON ---------------------------------------------------
# {"name": ..., "clip": [min, max], "inputs": [[...]], "labels": [...]}

def dataset_to_obj(data: LabeledDataset) -> dict:
    return {
        "name": data.name,
        "clip": [float(format_real(data.clip_min)),
                 float(format_real(data.clip_max))],
        "inputs": [[float(format_real(v)) for v in row] for row in data.inputs],
        "labels": [int(v) for v in data.labels],
        "num_classes": data.num_classes,
    }


def save_dataset(data: LabeledDataset, path: str) -> None:
    write_atomic(path, dumps_canonical(dataset_to_obj(data), sort_keys=False) + "\n")


def load_dataset(path: str) -> LabeledDataset:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    for key in ("name", "clip", "inputs", "labels"):
        if key not in obj:
            raise FormatError(f"{path}: missing field {key!r}")
    labels = np.asarray(obj["labels"], dtype=np.int64)
    num_classes = obj.get("num_classes")
    if num_classes is None:
        num_classes = int(labels.max()) + 1 if labels.size else 1
    return LabeledDataset(
        name=obj["name"],
        inputs=np.asarray(obj["inputs"], dtype=np.float64),
        labels=labels,
        num_classes=int(num_classes),
        clip_min=float(obj["clip"][0]),
        clip_max=float(obj["clip"][1]),
    )
