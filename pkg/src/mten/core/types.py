import json
from dataclasses import dataclass
from typing import Any, Dict, NamedTuple

import numpy as np


@dataclass(frozen=True)
class IterationSettings:
    """Power iteration settings

    tol: relative bracket width to stop at
    max_iter: iteration limit per solve
    sigma: diagonal shift of the iterated tensor, B = A + sigma I
    epsilon: entrywise perturbation, B = A + sigma I + epsilon E
    seed: seed for sampling-based checks
    fallback: restart once with a tiny epsilon after a failed solve

    Iterates are normalized in the 1-norm.
    """

    tol: float = 1e-10
    max_iter: int = 10000
    sigma: float = 1.0
    epsilon: float = 0.0
    seed: int = 0
    fallback: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")


class Bracket(NamedTuple):
    """Collatz-Wielandt bracket [lower, upper] around a spectral radius"""

    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return self.lower / 2 + self.upper / 2


class EigenvalueBounds(NamedTuple):
    """Bounds on every real eigenvalue

    lower = min_i(A_{i...i} - C_i), upper = max_i(A_{i...i} + C_i),
    with C_i the sum of |off-diagonal entries| of slice i
    """

    lower: float
    upper: float
    offdiag_row_sums: np.ndarray


def jsonable(value: Any) -> Any:
    """numpy scalars and arrays as plain python objects"""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def vector_str(x: np.ndarray) -> str:
    return "(" + ", ".join(f"{v:.10g}" for v in x) + ")"


@dataclass(frozen=True, eq=False)
class SpectralOutcome:
    """Largest eigenvalue of a nonnegative tensor

    eigenvalue: bracket midpoint minus sigma
    eigenvector: final iterate, nonnegative, sums to 1
    iterations: iterations run
    final_bracket: last bracket, for the shifted (and perturbed) tensor
    residual: scaled inf-norm of A x^{m-1} - eigenvalue x^{[m-1]}
    converged: bracket width met the tolerance
    epsilon_used: perturbation of the solve that produced this outcome
    sigma: diagonal shift of the solve

    String formats: text (default) and json
    """

    eigenvalue: float
    eigenvector: np.ndarray
    iterations: int
    final_bracket: Bracket
    residual: float
    converged: bool
    epsilon_used: float
    sigma: float

    def as_dict(self) -> Dict[str, Any]:
        return jsonable(
            dict(
                eigenvalue=self.eigenvalue,
                eigenvector=self.eigenvector,
                iterations=self.iterations,
                bracket=dict(
                    lower=self.final_bracket.lower - self.sigma,
                    upper=self.final_bracket.upper - self.sigma,
                ),
                residual=self.residual,
                converged=self.converged,
                epsilon_used=self.epsilon_used,
                sigma=self.sigma,
            )
        )

    def __format__(self, spec: str) -> str:
        if spec == "json":
            return json.dumps(self.as_dict())
        if spec in ("", "text"):
            lower, upper = self.final_bracket
            return "\n".join(
                [
                    f"eigenvalue: {self.eigenvalue:.12g}",
                    f"eigenvector: {vector_str(self.eigenvector)}",
                    f"bracket: [{lower - self.sigma:.12g}, {upper - self.sigma:.12g}]",
                    f"iterations: {self.iterations}",
                    f"residual: {self.residual:.3g}",
                    f"converged: {str(self.converged).lower()}",
                    f"epsilon: {self.epsilon_used:.3g}",
                ]
            )

        raise ValueError(
            f"Unknown format code '{spec}' for object of type '{self.__class__.__qualname__}'"
        )

    def __str__(self):
        return self.__format__("text")
