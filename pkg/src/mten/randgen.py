"""
Random Z-tensors for the benchmark

D has i.i.d. entries on the open interval (0, 1);
A_{i...i} = a_d + D_{i...i}, every other entry A_{i1...im} = -D_{i1...im}.

Draws come from numpy's PCG64 generator (np.random.default_rng) seeded with
the 64-bit GenSpec.seed, so equal specs give bit-identical tensors.
"""

from dataclasses import dataclass

import numpy as np

from mten import logger
from mten.core import DenseTensor
from mten.core.tensor import diagonal_offsets


@dataclass(frozen=True)
class GenSpec:
    """
    order: m >= 2
    dim: n >= 1
    a_d: diagonal offset, > 0
    seed: 64-bit generator seed
    """

    order: int
    dim: int
    a_d: float
    seed: int = 0

    def __post_init__(self):
        if self.order < 2:
            raise ValueError(f"order must be >= 2, got {self.order}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if not self.a_d > 0:
            raise ValueError(f"a_d must be > 0, got {self.a_d}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")


def derive_seed(seed: int, trial: int) -> int:
    """per-trial seed, wraps around at 2**64"""
    return (seed + trial) % 2**64


def procedure1(spec: GenSpec) -> DenseTensor:
    rng = np.random.default_rng(spec.seed)
    size = spec.dim**spec.order
    draws = rng.random(size)
    # random() is on [0, 1): push exact zeros into the open interval
    draws[draws == 0] = np.nextafter(0, 1)

    entries = -draws
    diagonal = diagonal_offsets(spec.order, spec.dim)
    entries[diagonal] = spec.a_d + draws[diagonal]
    logger.debug(f"generated {spec}")
    return DenseTensor(spec.order, spec.dim, entries)
