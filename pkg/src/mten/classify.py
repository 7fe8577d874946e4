"""
M-tensor classification of Z-tensors

A Z-tensor A is an M-tensor iff its smallest real eigenvalue tau(A) is positive.
With U = max_i(A_{i...i} + C_i) the tensor C = U I - A is nonnegative and
tau(A) = U - rho(C), where rho(C) comes from the power iteration.
"""

import json
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from mten import NotZTensor, TensorError, logger
from mten.core import (
    DenseTensor,
    EigenvalueBounds,
    IterationSettings,
    SpectralOutcome,
    apply_contraction,
    is_z_tensor,
    largest_eigenvalue,
    real_eigenvalue_bounds,
    residual,
    shift_combine,
)
from mten.core.tensor import Vector, as_vector
from mten.core.types import jsonable, vector_str

EXACT_LIMIT = 16


class Status(str, Enum):
    m_tensor = "m-tensor"
    not_m_tensor = "not-m-tensor"
    indeterminate = "indeterminate"

    def __str__(self) -> str:
        return self.value

    @property
    def exit_code(self) -> int:
        return {"m-tensor": 0, "not-m-tensor": 1, "indeterminate": 2}[self.value]


class Eigenpair(NamedTuple):
    value: float
    vector: np.ndarray


@dataclass(frozen=True, eq=False)
class MTensorVerdict:
    """
    M-tensor verdict for a Z-tensor

    status          m-tensor if tau > guard_band, not-m-tensor if tau < -guard_band
    tau             smallest real eigenvalue estimate, U - rho(C)
    eigenvector     Perron vector of C, also an eigenvector of A for tau
    guard_band      max(10 tol (1 + |U|), epsilon_used n**(m-1))
    spectral        inner power iteration on C
    bounds          real eigenvalue bounds of A
    offset          extra shift, C = (bounds.upper + offset) I - A
    residual        residual of (tau, eigenvector) on A

    String formats: text (default) and json
    """

    status: Status
    tau: float
    eigenvector: np.ndarray
    guard_band: float
    spectral: SpectralOutcome
    bounds: EigenvalueBounds
    offset: float
    residual: float

    @property
    def upper(self) -> float:
        """the shift U used to build C"""
        return self.bounds.upper + self.offset

    def as_dict(self) -> Dict[str, Any]:
        return jsonable(
            dict(
                status=str(self.status),
                tau=self.tau,
                eigenvector=self.eigenvector,
                guard_band=self.guard_band,
                lower_bound=self.bounds.lower,
                upper_bound=self.bounds.upper,
                iterations=self.spectral.iterations,
                converged=self.spectral.converged,
                residual=self.residual,
                epsilon_used=self.spectral.epsilon_used,
            )
        )

    def __format__(self, spec: str) -> str:
        if spec == "json":
            return json.dumps(self.as_dict())
        if spec in ("", "text"):
            return "\n".join(
                [
                    f"status: {self.status}",
                    f"tau: {self.tau:.12g}",
                    f"eigenvector: {vector_str(self.eigenvector)}",
                    f"bounds: [{self.bounds.lower:.12g}, {self.bounds.upper:.12g}]",
                    f"guard band: {self.guard_band:.3g}",
                    f"iterations: {self.spectral.iterations}",
                    f"residual: {self.residual:.3g}",
                ]
            )

        raise ValueError(
            f"Unknown format code '{spec}' for object of type '{self.__class__.__qualname__}'"
        )

    def __str__(self):
        return self.__format__("text")


def _check_z_tensor(tensor: DenseTensor) -> None:
    if not is_z_tensor(tensor):
        raise NotZTensor("not a Z-tensor: positive off-diagonal entries")


def _solve(
    tensor: DenseTensor, settings: IterationSettings, offset: float
) -> Tuple[float, SpectralOutcome, EigenvalueBounds]:
    _check_z_tensor(tensor)
    if offset < 0:
        raise ValueError(f"offset must be >= 0, got {offset}")

    bounds = real_eigenvalue_bounds(tensor)
    upper = bounds.upper + offset
    outcome = largest_eigenvalue(shift_combine(-1, tensor, -upper), settings)
    return upper - outcome.eigenvalue, outcome, bounds


def smallest_real_eigenvalue(
    tensor: DenseTensor, settings: IterationSettings = IterationSettings(), offset: float = 0.0
) -> Eigenpair:
    """tau(A) and its nonnegative eigenvector, no thresholding"""
    tau, outcome, _ = _solve(tensor, settings, offset)
    return Eigenpair(tau, outcome.eigenvector)


def classify_m_tensor(
    tensor: DenseTensor, settings: IterationSettings = IterationSettings(), offset: float = 0.0
) -> MTensorVerdict:
    tau, outcome, bounds = _solve(tensor, settings, offset)
    upper = bounds.upper + offset
    guard_band = max(
        10 * settings.tol * (1 + abs(upper)),
        outcome.epsilon_used * tensor.dim ** (tensor.order - 1),
    )

    if not outcome.converged:
        status = Status.indeterminate
    elif tau > guard_band:
        status = Status.m_tensor
    elif tau < -guard_band:
        status = Status.not_m_tensor
    else:
        status = Status.indeterminate
    if status == Status.indeterminate:
        logger.warning(f"indeterminate verdict: tau {tau:.3g}, guard band {guard_band:.3g}")
    else:
        logger.debug(f"{status}: tau {tau!r} after {outcome.iterations} iterations")

    return MTensorVerdict(
        status=status,
        tau=tau,
        eigenvector=outcome.eigenvector,
        guard_band=guard_band,
        spectral=outcome,
        bounds=bounds,
        offset=offset,
        residual=residual(tensor, tau, outcome.eigenvector),
    )


def necessary_condition(tensor: DenseTensor) -> bool:
    """M-tensors in Z have a positive diagonal entry"""
    return bool(tensor.diagonal().max() > 0)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A = s I - B with B nonnegative and s >= max_i A_{i...i}"""

    s: float
    nonnegative: DenseTensor

    def reconstruct(self) -> DenseTensor:
        return shift_combine(-1, self.nonnegative, -self.s)

    def spectral_gap(self, settings: IterationSettings = IterationSettings()) -> float:
        """s - rho(B): A is an M-tensor iff positive"""
        return self.s - largest_eigenvalue(self.nonnegative, settings).eigenvalue


def decompose(tensor: DenseTensor, s: float) -> Decomposition:
    _check_z_tensor(tensor)
    max_diagonal = float(tensor.diagonal().max())
    if s < max_diagonal:
        raise TensorError(f"s={s} is below the max diagonal entry {max_diagonal}")
    return Decomposition(s, shift_combine(-1, tensor, -s))


def mtensor_by_decomposition(
    tensor: DenseTensor, settings: IterationSettings = IterationSettings()
) -> float:
    """spectral gap of the decomposition at s = max(max diagonal, U)"""
    s = max(float(tensor.diagonal().max()), real_eigenvalue_bounds(tensor).upper)
    return decompose(tensor, s).spectral_gap(settings)


def positivity_probe(tensor: DenseTensor, x: Vector) -> bool:
    """A x^{m-1} > 0 at a nonnegative x

    Heuristic only: whether such an x characterizes M-tensors in Z is open.
    """
    vec = as_vector(tensor, x)
    if (vec < 0).any():
        raise TensorError("x must be nonnegative")
    return bool((apply_contraction(tensor, vec) > 0).all())


@dataclass(frozen=True)
class DominanceReport:
    """
    Diagonal dominance, |A_{i...i}| against C_i = sum of |off-diagonal| in slice i

    rows_strict     1-based rows with strict inequality
    """

    diagonally_dominant: bool
    strictly_dominant: bool
    strict_row_exists: bool
    rows_strict: List[int]
    diagonal_nonnegative: bool


def check_diagonal_dominance(tensor: DenseTensor) -> DominanceReport:
    sums = real_eigenvalue_bounds(tensor).offdiag_row_sums
    diagonal = tensor.diagonal()
    strict = np.flatnonzero(sums < np.abs(diagonal))
    return DominanceReport(
        diagonally_dominant=bool((sums <= np.abs(diagonal)).all()),
        strictly_dominant=len(strict) == tensor.dim,
        strict_row_exists=len(strict) > 0,
        rows_strict=[int(i) + 1 for i in strict],
        diagonal_nonnegative=bool((diagonal >= 0).all()),
    )


def is_weakly_irreducible(tensor: DenseTensor) -> bool:
    """strong connectivity of the digraph i -> j iff A_{i i2...im} != 0 with j in {i2,...,im}"""
    nonzero = tensor.array != 0
    adjacency = np.zeros((tensor.dim, tensor.dim), dtype=bool)
    for axis in range(1, tensor.order):
        others = tuple(k for k in range(1, tensor.order) if k != axis)
        adjacency |= nonzero.any(axis=others) if others else nonzero

    components, _ = connected_components(
        csr_matrix(adjacency), directed=True, connection="strong"
    )
    return bool(components == 1)


def is_reducible_exact(
    tensor: DenseTensor, exact_limit: int = EXACT_LIMIT
) -> Optional[FrozenSet[int]]:
    """1-based witness I with A_{i1...im} = 0 for i1 in I and i2..im not in I, or None

    Enumerates all 2**n - 2 candidate subsets, smallest first.
    """
    dim = tensor.dim
    if dim > exact_limit:
        raise TensorError(f"dim {dim} exceeds the exact enumeration limit {exact_limit}")

    array = tensor.array
    for size in range(1, dim):
        for subset in combinations(range(dim), size):
            rest = [i for i in range(dim) if i not in subset]
            if not array[np.ix_(subset, *[rest] * (tensor.order - 1))].any():
                return frozenset(i + 1 for i in subset)
    return None


class Conclusion(str, Enum):
    proven = "proven-m-tensor"
    none = "no-conclusion"

    def __str__(self) -> str:
        return self.value


class SufficiencyReport(NamedTuple):
    conclusion: Conclusion
    proxy_used: bool = False


def sufficient_m_test(tensor: DenseTensor, exact_limit: int = EXACT_LIMIT) -> SufficiencyReport:
    """strictly or irreducibly diagonally dominant Z-tensor with nonnegative diagonal

    Only a sufficient condition: never concludes the tensor is not an M-tensor.
    Above exact_limit irreducibility is replaced by the weakly irreducible digraph check.
    """
    if not is_z_tensor(tensor):
        return SufficiencyReport(Conclusion.none)

    report = check_diagonal_dominance(tensor)
    if not report.diagonal_nonnegative:
        return SufficiencyReport(Conclusion.none)
    if report.strictly_dominant:
        return SufficiencyReport(Conclusion.proven)
    if not (report.diagonally_dominant and report.strict_row_exists):
        return SufficiencyReport(Conclusion.none)

    if tensor.dim <= exact_limit:
        irreducible, proxy_used = is_reducible_exact(tensor, exact_limit) is None, False
    else:
        logger.debug(f"dim {tensor.dim} > {exact_limit}: weak irreducibility proxy")
        irreducible, proxy_used = is_weakly_irreducible(tensor), True

    conclusion = Conclusion.proven if irreducible else Conclusion.none
    return SufficiencyReport(conclusion, proxy_used)
