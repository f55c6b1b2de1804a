"""Exception hierarchy shared across the toolkit."""


class AdvkitError(Exception):
    """Base class for all toolkit errors."""


class ArgumentError(AdvkitError, ValueError):
    """A caller-supplied argument violates a documented precondition."""


class DimensionError(ArgumentError):
    """Array shapes do not line up (names the offending layer/axis)."""


class FormatError(AdvkitError, ValueError):
    """A file being parsed is malformed (names the offending offset/key)."""


class ConfigError(AdvkitError, ValueError):
    """A benchmark configuration is unusable (unknown key, missing section)."""


class VersionMismatchError(AdvkitError):
    """Benchmark refused: toolkit major version differs from expectation."""


class TrainingDivergedError(AdvkitError, RuntimeError):
    """Training loss became non-finite; carries epoch and batch indices."""

    def __init__(self, epoch: int, batch: int):
        super().__init__(f"training loss is non-finite at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


class EvaluationError(AdvkitError, RuntimeError):
    """A user-supplied callable returned a non-finite value."""
