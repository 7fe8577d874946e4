"""
Positive definiteness of even-order homogeneous forms

f(x) = sum A_{i1...im} x_i1 ... x_im is unchanged by symmetrizing A.
For a symmetric Z-tensor of even order, f is positive definite iff A is an M-tensor.
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, Optional

import numpy as np

from mten import logger
from mten.core import DenseTensor, IterationSettings, eval_form, is_z_tensor, symmetrize
from mten.core.types import jsonable, vector_str

from .classify import MTensorVerdict, Status, classify_m_tensor

DEFAULT_SAMPLES = 1000


class PDStatus(str, Enum):
    positive_definite = "positive-definite"
    not_positive_definite = "not-positive-definite"
    inapplicable = "inapplicable"
    indeterminate = "indeterminate"

    def __str__(self) -> str:
        return self.value

    @property
    def exit_code(self) -> int:
        if self == PDStatus.positive_definite:
            return 0
        if self == PDStatus.not_positive_definite:
            return 1
        return 2


class Reason(str, Enum):
    odd_order = "odd-order"
    not_z_tensor = "not-z-tensor"
    numerical = "numerical"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class PDVerdict:
    """
    Positive definiteness verdict

    status          see PDStatus
    tau             smallest real eigenvalue of the symmetrized tensor, if classified
    witness         nonzero x with f(x) <= 0, if one was found
    reason          why no M-tensor verdict decided the status
    symmetrized     the input was not symmetric and was averaged first
    verdict         underlying M-tensor verdict, if classified

    String formats: text (default) and json
    """

    status: PDStatus
    tau: Optional[float] = None
    witness: Optional[np.ndarray] = None
    reason: Optional[Reason] = None
    symmetrized: bool = False
    verdict: Optional[MTensorVerdict] = None

    def as_dict(self) -> Dict[str, Any]:
        return jsonable(
            dict(
                status=str(self.status),
                tau=self.tau,
                witness=self.witness,
                reason=None if self.reason is None else str(self.reason),
                symmetrized=self.symmetrized,
            )
        )

    def __format__(self, spec: str) -> str:
        if spec == "json":
            return json.dumps(self.as_dict())
        if spec in ("", "text"):
            status = f"{self.status}" + (f" ({self.reason})" if self.reason else "")
            lines = [f"status: {status}"]
            if self.tau is not None:
                lines.append(f"tau: {self.tau:.12g}")
            if self.witness is not None:
                lines.append(f"witness: {vector_str(self.witness)}")
            lines.append(f"symmetrized: {str(self.symmetrized).lower()}")
            return "\n".join(lines)

        raise ValueError(
            f"Unknown format code '{spec}' for object of type '{self.__class__.__qualname__}'"
        )

    def __str__(self):
        return self.__format__("text")


def _unit_samples(dim: int, trials: int, seed: int) -> Iterator[np.ndarray]:
    """sphere-uniform unit vectors: normalized standard normals"""
    rng = np.random.default_rng(seed)
    for x in rng.standard_normal((trials, dim)):
        norm = np.linalg.norm(x)
        if norm > 0:
            yield x / norm


def falsify_by_sampling(tensor: DenseTensor, trials: int, seed: int = 0) -> Optional[np.ndarray]:
    """first sampled unit vector with f(x) <= 0, or None"""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")

    for x in _unit_samples(tensor.dim, trials, seed):
        if eval_form(tensor, x) <= 0:
            logger.debug(f"sampled witness {x}")
            return x
    return None


def _odd_order_witness(tensor: DenseTensor, samples: int, seed: int) -> np.ndarray:
    """f(-x) = -f(x): any probe with f(x) != 0 yields a witness"""
    probes = [np.ones(tensor.dim)]
    probes.extend(np.eye(tensor.dim))
    probes.extend(_unit_samples(tensor.dim, samples, seed))
    for x in probes:
        value = eval_form(tensor, x)
        if value > 0:
            return -x
        if value < 0:
            return x

    # f vanishes on every probe, f(e_1) = 0 <= 0
    return np.eye(tensor.dim)[0]


def test_positive_definite(
    tensor: DenseTensor,
    settings: IterationSettings = IterationSettings(),
    samples: int = DEFAULT_SAMPLES,
) -> PDVerdict:
    """Positive definiteness of the form with coefficient tensor A"""
    symmetric = symmetrize(tensor)
    symmetrized = symmetric is not tensor

    if tensor.order % 2:
        witness = _odd_order_witness(symmetric, samples, settings.seed)
        return PDVerdict(
            PDStatus.not_positive_definite,
            witness=witness,
            reason=Reason.odd_order,
            symmetrized=symmetrized,
        )

    if not is_z_tensor(symmetric):
        return PDVerdict(PDStatus.inapplicable, reason=Reason.not_z_tensor, symmetrized=symmetrized)

    verdict = classify_m_tensor(symmetric, settings)
    if verdict.status == Status.m_tensor:
        return PDVerdict(
            PDStatus.positive_definite,
            tau=verdict.tau,
            symmetrized=symmetrized,
            verdict=verdict,
        )
    if verdict.status == Status.indeterminate:
        return PDVerdict(
            PDStatus.indeterminate,
            tau=verdict.tau,
            reason=Reason.numerical,
            symmetrized=symmetrized,
            verdict=verdict,
        )

    # f(x) = tau sum x_i^m <= 0 at the eigenvector, up to rounding
    witness: Optional[np.ndarray] = verdict.eigenvector
    if eval_form(symmetric, witness) > 0:
        witness = falsify_by_sampling(symmetric, samples, settings.seed)
    if witness is None:
        logger.debug("no witness found, status stands on tau")

    return PDVerdict(
        PDStatus.not_positive_definite,
        tau=verdict.tau,
        witness=witness,
        symmetrized=symmetrized,
        verdict=verdict,
    )
