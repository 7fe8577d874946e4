"""
Benchmark: classify random Z-tensors

Each trial generates a tensor with its own derived seed and classifies it.
Counts only depend on (order, dim, a_d, trials, seed), never on the worker
count: trials are independent and the aggregation is integer counting.

Row-sum oracle: with C = U I - A, min row sum <= rho(C) <= max row sum, so
tau >= U - max row sum (M-tensor if positive) and tau <= U - min row sum
(not an M-tensor if negative). A definite oracle verdict that disagrees with
the classification counts as a mismatch.
"""

import json
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np

from mten import logger
from mten.core import (
    DenseTensor,
    IterationSettings,
    real_eigenvalue_bounds,
    row_sum_bounds,
    shift_combine,
)

from .classify import Status, classify_m_tensor
from .randgen import GenSpec, derive_seed, procedure1

GRID_ORDERS = (3, 4)
GRID_DIMS = (10, 20, 30, 40, 50)
GRID_OFFSETS = (5.0, 10.0, 100.0, 1000.0)


@dataclass(frozen=True)
class BenchRow:
    """
    Benchmark row

    order, dim, a_d, trials, seed     generation parameters
    yes_count, no_count               M-tensor / not M-tensor verdicts
    indeterminate_count               verdicts inside the guard band
    avg_seconds                       mean wall-clock seconds per classification
    oracle_yes, oracle_no             definite row-sum oracle verdicts
    oracle_mismatch                   definite oracle verdicts contradicted by the classification

    String formats: text (default), json, csv and header
    """

    order: int
    dim: int
    a_d: float
    trials: int
    yes_count: int
    no_count: int
    indeterminate_count: int
    avg_seconds: float
    seed: int
    oracle_yes: int = 0
    oracle_no: int = 0
    oracle_mismatch: int = 0

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @staticmethod
    def _csv_field(name: str, value: Any) -> str:
        if name == "avg_seconds":
            return f"{value:.6f}"
        if isinstance(value, float):
            # shortest round-trip digits, no trailing ".0"
            return np.format_float_positional(value, trim="-")
        return f"{value:d}"

    def __format__(self, spec: str) -> str:
        if spec == "header":
            return ", ".join(asdict(self).keys())
        if spec == "csv":
            return ", ".join(self._csv_field(k, v) for k, v in asdict(self).items())
        if spec == "json":
            return json.dumps(self.as_dict())
        if spec in ("", "text"):
            return (
                f"m={self.order} n={self.dim} A_d={self.a_d:g}: "
                f"yes {self.yes_count}, no {self.no_count}, "
                f"indeterminate {self.indeterminate_count}, "
                f"{self.avg_seconds:.4f} s/trial "
                f"(oracle yes {self.oracle_yes}, no {self.oracle_no}, "
                f"mismatch {self.oracle_mismatch})"
            )

        raise ValueError(
            f"Unknown format code '{spec}' for object of type '{self.__class__.__qualname__}'"
        )

    def __str__(self):
        return self.__format__("text")


class TrialResult(NamedTuple):
    status: Status
    seconds: float
    oracle: Optional[Status]


def row_sum_oracle(tensor: DenseTensor) -> Optional[Status]:
    """M-tensor verdict from row sums of C = U I - A alone, None if undecided"""
    upper = real_eigenvalue_bounds(tensor).upper
    rows = row_sum_bounds(shift_combine(-1, tensor, -upper))
    if upper - rows.upper > 0:
        return Status.m_tensor
    if upper - rows.lower < 0:
        return Status.not_m_tensor
    return None


def run_trial(
    order: int, dim: int, a_d: float, seed: int, settings: IterationSettings
) -> TrialResult:
    tensor = procedure1(GenSpec(order, dim, a_d, seed))
    start = time.perf_counter()
    verdict = classify_m_tensor(tensor, settings)
    seconds = time.perf_counter() - start
    return TrialResult(verdict.status, seconds, row_sum_oracle(tensor))


def run_bench(
    order: int,
    dim: int,
    a_d: float,
    trials: int = 100,
    seed: int = 0,
    settings: IterationSettings = IterationSettings(),
    workers: int = 1,
) -> BenchRow:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    seeds = [derive_seed(seed, trial) for trial in range(trials)]
    work = partial(run_trial, order, dim, a_d, settings=settings)
    logger.debug(f"bench m={order} n={dim} a_d={a_d}: {trials} trials on {workers} workers")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results: List[TrialResult] = list(pool.map(work, seeds))
    else:
        results = [work(s) for s in seeds]

    status = Counter(r.status for r in results)
    oracle = Counter(r.oracle for r in results)
    mismatch = sum(1 for r in results if r.oracle is not None and r.oracle != r.status)
    row = BenchRow(
        order=order,
        dim=dim,
        a_d=a_d,
        trials=trials,
        yes_count=status[Status.m_tensor],
        no_count=status[Status.not_m_tensor],
        indeterminate_count=status[Status.indeterminate],
        avg_seconds=sum(r.seconds for r in results) / trials,
        seed=seed,
        oracle_yes=oracle[Status.m_tensor],
        oracle_no=oracle[Status.not_m_tensor],
        oracle_mismatch=mismatch,
    )
    logger.info(f"{row}")
    return row
