"""
Dense m-order n-dimensional real tensors

NOTE:
- entries are stored flat, row-major: i1 varies slowest, im fastest
- multi-indices are 1-based on the public API, 0-based internally
- tensors are immutable, all operations return new objects
"""

from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np

from mten import IndexOutOfRange, NonFiniteEntry, ShapeMismatch, TensorError

Vector = Union[Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """m-order n-dimensional real tensor

    order: m >= 2
    dim: n >= 1
    entries: flat float array of length n**m, row-major, read-only
    """

    order: int
    dim: int
    entries: np.ndarray

    def __post_init__(self):
        if self.order < 2:
            raise ShapeMismatch(f"order must be >= 2, got {self.order}")
        if self.dim < 1:
            raise ShapeMismatch(f"dim must be >= 1, got {self.dim}")

        entries = np.array(self.entries, dtype=float).ravel()
        if entries.size != self.size:
            raise ShapeMismatch(f"length must be {self.size}, got {entries.size}")
        if not np.isfinite(entries).all():
            raise NonFiniteEntry(f"{np.count_nonzero(~np.isfinite(entries))} non-finite entries")

        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return self.dim**self.order

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.dim,) * self.order

    @property
    def array(self) -> np.ndarray:
        """read-only view with shape (n,)*m"""
        return self.entries.reshape(self.shape)

    def diagonal(self) -> np.ndarray:
        """diagonal entries A_{i...i}"""
        return self.entries[diagonal_offsets(self.order, self.dim)]

    def _check_same_shape(self, other: "DenseTensor") -> None:
        if (self.order, self.dim) != (other.order, other.dim):
            raise ShapeMismatch(
                f"order/dim mismatch: ({self.order}, {self.dim}) != ({other.order}, {other.dim})"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return (self.order, self.dim) == (other.order, other.dim) and np.array_equal(
            self.entries, other.entries
        )

    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        self._check_same_shape(other)
        return DenseTensor(self.order, self.dim, self.entries + other.entries)

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        self._check_same_shape(other)
        return DenseTensor(self.order, self.dim, self.entries - other.entries)

    def __mul__(self, scalar: float) -> "DenseTensor":
        return DenseTensor(self.order, self.dim, self.entries * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "DenseTensor":
        return DenseTensor(self.order, self.dim, -self.entries)

    def __repr__(self) -> str:
        return f"DenseTensor(order={self.order}, dim={self.dim})"


def build(order: int, dim: int, entries: Vector) -> DenseTensor:
    """Tensor with the given row-major entries"""
    return DenseTensor(order, dim, entries)


def diagonal_offsets(order: int, dim: int) -> np.ndarray:
    """flat offsets of A_{i...i}: i * (1 + n + ... + n**(m-1))"""
    stride = sum(dim**k for k in range(order))
    return np.arange(dim) * stride


def entry(tensor: DenseTensor, idx: Sequence[int]) -> float:
    """A_{i1...im} for a 1-based multi-index"""
    if len(idx) != tensor.order:
        raise ShapeMismatch(f"index length must be {tensor.order}, got {len(idx)}")
    if any(not 1 <= i <= tensor.dim for i in idx):
        raise IndexOutOfRange(f"index {tuple(idx)} out of range [1, {tensor.dim}]")

    offset = 0
    for i in idx:
        offset = offset * tensor.dim + (i - 1)
    return float(tensor.entries[offset])


def unit_tensor(order: int, dim: int) -> DenseTensor:
    """Unit tensor I: entries delta_{i1...im}"""
    entries = np.zeros(dim**order)
    entries[diagonal_offsets(order, dim)] = 1
    return DenseTensor(order, dim, entries)


def ones_tensor(order: int, dim: int) -> DenseTensor:
    """All-ones tensor E"""
    return DenseTensor(order, dim, np.ones(dim**order))


def as_vector(tensor: DenseTensor, x: Vector) -> np.ndarray:
    """x as a float array of length tensor.dim"""
    vec = np.asarray(x, dtype=float)
    if vec.shape != (tensor.dim,):
        raise ShapeMismatch(f"vector must have shape ({tensor.dim},), got {vec.shape}")
    return vec


def apply_contraction(tensor: DenseTensor, x: Vector) -> np.ndarray:
    """A x^{m-1}

    Dense evaluation, contracting the trailing index first (im, then i(m-1), ..., i2).
    The reduction order is fixed, so repeated calls are bit-identical.
    """
    vec = as_vector(tensor, x)
    return reduce(np.dot, [tensor.array] + [vec] * (tensor.order - 1))


def hadamard_power(x: Vector, p: float) -> np.ndarray:
    """componentwise power x^{[p]}"""
    vec = np.asarray(x, dtype=float)
    if not float(p).is_integer() and (vec < 0).any():
        raise TensorError(f"negative component with fractional exponent {p}")
    return np.power(vec, p)


def eval_form(tensor: DenseTensor, x: Vector) -> float:
    """homogeneous form f(x) = x . A x^{m-1}"""
    vec = as_vector(tensor, x)
    return float(vec @ apply_contraction(tensor, vec))


def shift_combine(a: float, tensor: DenseTensor, b: float) -> DenseTensor:
    """a (A + b I)"""
    entries = np.array(tensor.entries)
    entries[diagonal_offsets(tensor.order, tensor.dim)] += b
    return DenseTensor(tensor.order, tensor.dim, a * entries)


def offdiagonal(tensor: DenseTensor) -> np.ndarray:
    """flat entries with the diagonal set to 0"""
    entries = np.array(tensor.entries)
    entries[diagonal_offsets(tensor.order, tensor.dim)] = 0
    return entries


def is_nonnegative(tensor: DenseTensor) -> bool:
    return bool((tensor.entries >= 0).all())


def is_z_tensor(tensor: DenseTensor) -> bool:
    """off-diagonal entries are nonpositive, diagonal unconstrained"""
    return bool((offdiagonal(tensor) <= 0).all())


def is_symmetric(tensor: DenseTensor) -> bool:
    """invariant under any permutation of the index tuple

    adjacent transpositions generate all permutations
    """
    array = tensor.array
    return all(
        np.array_equal(array, np.swapaxes(array, k, k + 1)) for k in range(tensor.order - 1)
    )


class StructureReport(NamedTuple):
    """Structural predicates of a tensor"""

    nonnegative: bool
    z_tensor: bool
    symmetric: bool
    max_diagonal: float


def structure_report(tensor: DenseTensor) -> StructureReport:
    return StructureReport(
        nonnegative=is_nonnegative(tensor),
        z_tensor=is_z_tensor(tensor),
        symmetric=is_symmetric(tensor),
        max_diagonal=float(tensor.diagonal().max()),
    )


def symmetrize(tensor: DenseTensor) -> DenseTensor:
    """Average over index permutations

    Entries are grouped by their sorted multi-index, every member of a group
    gets the group mean. Symmetric tensors are returned unchanged.
    """
    if is_symmetric(tensor):
        return tensor

    index = np.sort(np.indices(tensor.shape).reshape(tensor.order, -1), axis=0)
    keys = np.ravel_multi_index(tuple(index), tensor.shape)
    sums = np.bincount(keys, weights=tensor.entries, minlength=tensor.size)
    counts = np.bincount(keys, minlength=tensor.size)
    return DenseTensor(tensor.order, tensor.dim, sums[keys] / counts[keys])
