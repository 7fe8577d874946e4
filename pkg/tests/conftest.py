from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np
import pytest

from mten.core import DenseTensor, build, ones_tensor, shift_combine, unit_tensor
from mten.core.tensor import diagonal_offsets


def shifted_ones(order: int, dim: int, c: float) -> DenseTensor:
    """c I - E: diagonal c - 1, off-diagonal -1"""
    return shift_combine(-1, ones_tensor(order, dim), -c)


class Known(NamedTuple):
    order: int
    dim: int
    entries: Tuple[float, ...]
    tau: Optional[float] = None

    @property
    def tensor(self) -> DenseTensor:
        return build(self.order, self.dim, self.entries)


def known(tensor: DenseTensor, tau: Optional[float] = None) -> Known:
    return Known(tensor.order, tensor.dim, tuple(tensor.entries), tau)


class ZTensors(Enum):
    """hand-verified Z-tensors and their smallest real eigenvalue"""

    Q = Known(3, 2, (4, -1, -1, -1, -1, -1, -1, 4), tau=1.0)
    Q_NOT = Known(3, 2, (2, -1, -1, -1, -1, -1, -1, 2), tau=-1.0)
    MATRIX = Known(2, 2, (2, -1, -1, 2), tau=1.0)
    UNIT = known(unit_tensor(3, 3), tau=1.0)
    FORM_PD = known(shifted_ones(4, 2, 9), tau=1.0)
    FORM_NPD = known(shifted_ones(4, 2, 7), tau=-1.0)

    def __str__(self) -> str:
        return self.name

    @property
    def tensor(self) -> DenseTensor:
        return self.value.tensor

    @property
    def tau(self) -> float:
        return self.value.tau


@pytest.fixture(params=list(ZTensors), ids=str)
def z_known(request) -> ZTensors:
    """hand-verified Z-tensors"""
    return request.param


@pytest.fixture()
def Q() -> DenseTensor:
    """order 3, dim 2: Q_111 = Q_222 = 4, every other entry -1"""
    return ZTensors.Q.tensor


def random_nonnegative(rng: np.random.Generator, order: int, dim: int) -> DenseTensor:
    return DenseTensor(order, dim, rng.random(dim**order))


def random_z_tensor(
    rng: np.random.Generator, order: int, dim: int, low: float = -2.0, high: float = 10.0
) -> DenseTensor:
    """off-diagonal on (-1, 0], diagonal uniform on [low, high)"""
    entries = -rng.random(dim**order)
    entries[diagonal_offsets(order, dim)] = rng.uniform(low, high, dim)
    return DenseTensor(order, dim, entries)


def strictly_dominant_z_tensor(rng: np.random.Generator, order: int, dim: int) -> DenseTensor:
    """Z-tensor with A_{i...i} > sum of |off-diagonal| in every slice"""
    entries = -rng.random(dim**order)
    diagonal = diagonal_offsets(order, dim)
    entries[diagonal] = 0
    sums = -entries.reshape(dim, -1).sum(axis=1)
    entries[diagonal] = sums + rng.uniform(0.1, 1.0, dim)
    return DenseTensor(order, dim, entries)
