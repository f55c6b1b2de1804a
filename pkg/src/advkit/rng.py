"""Seedable randomness used across the toolkit.

Every stochastic component draws from a Philox counter-based bit generator
keyed by an explicit 64-bit seed, so identical seeds give identical streams
on any platform.  Batch work derives one independent stream per example by
XOR-ing the base seed with the example index.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def make_generator(seed: int) -> np.random.Generator:
    """Return the toolkit's named generator (Philox) for ``seed``."""
    return np.random.Generator(np.random.Philox(seed & _MASK64))


def example_seed(base_seed: int, index: int) -> int:
    """Per-example seed: base seed XOR example index (both mod 2**64)."""
    return (base_seed & _MASK64) ^ (index & _MASK64)
