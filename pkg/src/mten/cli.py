import json
import logging
import os
import sys
from dataclasses import asdict, replace
from enum import Enum
from itertools import product
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 10):  # pragma: no cover
    from importlib import metadata
else:  # pragma: no cover
    import importlib_metadata as metadata

from typer import Argument, Context, Exit, Option, Typer, echo

from mten import logger
from mten.bench import GRID_DIMS, GRID_OFFSETS, GRID_ORDERS, run_bench
from mten.classify import check_diagonal_dominance, classify_m_tensor
from mten.core import (
    IterationSettings,
    Storage,
    exit_on_fail,
    largest_eigenvalue,
    real_eigenvalue_bounds,
    structure_report,
    write_tensor,
)
from mten.core.reader import format_tensor
from mten.core.types import jsonable
from mten.posdef import DEFAULT_SAMPLES, test_positive_definite
from mten.randgen import GenSpec, procedure1

main = Typer(help="Spectral radius of nonnegative tensors, M-tensors and positive definite forms")


logging.basicConfig(level=os.getenv("LEVEL", "WARNING"))


def version_callback(value: bool):  # pragma: no cover
    if not value:
        return

    package = "pymten"
    echo(f"{package} version {metadata.version(package)}")
    raise Exit()


@main.callback()
def callback(
    ctx: Context,
    tol: float = Option(1e-10, "--tol", help="relative bracket width to stop at"),
    max_iter: int = Option(10000, "--max-iter", help="iteration limit per solve"),
    sigma: float = Option(1.0, "--sigma", help="diagonal shift of the iteration"),
    epsilon: float = Option(0.0, "--epsilon", help="all-ones perturbation, 0 for auto fallback"),
    debug: bool = Option(False, "--debug", help="print DEBUG/logging messages"),
    version: Optional[bool] = Option(None, "--version", "-V", callback=version_callback),
):
    """Tensor eigenvalue toolkit"""
    logger.setLevel("DEBUG" if debug else os.getenv("LEVEL", "WARNING"))
    with exit_on_fail():
        settings = IterationSettings(tol=tol, max_iter=max_iter, sigma=sigma, epsilon=epsilon)
    ctx.obj = {"settings": settings}


class Format(str, Enum):
    text = "text"
    json = "json"

    def __str__(self) -> str:
        return self.value


class BenchFormat(str, Enum):
    text = "text"
    json = "json"
    csv = "csv"

    def __str__(self) -> str:
        return self.value


@main.command()
def gen(
    order: int = Option(..., "--order", "-m", help="tensor order"),
    dim: int = Option(..., "--dim", "-n", help="tensor dimension"),
    a_d: float = Option(..., "--ad", help="diagonal offset"),
    seed: int = Option(0, "--seed", help="generator seed"),
    storage: Storage = Option(Storage.dense, "--storage", help="file storage mode"),
    out: Optional[Path] = Option(None, "--out", "-o", help="tensor file [default: stdout]"),
):
    """Generate a random Z-tensor"""
    with exit_on_fail():
        tensor = procedure1(GenSpec(order, dim, a_d, seed))
        if out:
            write_tensor(out, tensor, storage)
        else:
            echo(format_tensor(tensor, storage), nl=False)


@main.command()
def info(
    ctx: Context,
    path: Path = Argument(..., help="tensor file", show_default=False),
    format: Format = Option(Format.text, "--format", "-f", help="report format"),
):
    """Structure, eigenvalue bounds and diagonal dominance of a tensor"""
    with exit_on_fail(path) as tensor:
        report = structure_report(tensor)
        bounds = real_eigenvalue_bounds(tensor)
        dominance = check_diagonal_dominance(tensor)

    if format == Format.json:
        echo(
            json.dumps(
                jsonable(
                    dict(
                        order=tensor.order,
                        dim=tensor.dim,
                        structure=report._asdict(),
                        lower_bound=bounds.lower,
                        upper_bound=bounds.upper,
                        offdiag_row_sums=bounds.offdiag_row_sums,
                        dominance=asdict(dominance),
                    )
                )
            )
        )
        return

    echo(f"order {tensor.order}, dim {tensor.dim}")
    for key, value in report._asdict().items():
        echo(f"{key}: {str(value).lower() if isinstance(value, bool) else value}")
    echo(f"real eigenvalues in [{bounds.lower:.12g}, {bounds.upper:.12g}]")
    for key, value in asdict(dominance).items():
        echo(f"{key}: {str(value).lower() if isinstance(value, bool) else value}")


@main.command()
def eig(
    ctx: Context,
    path: Path = Argument(..., help="nonnegative tensor file", show_default=False),
    format: Format = Option(Format.text, "--format", "-f", help="report format"),
):
    """Largest eigenvalue of a nonnegative tensor"""
    with exit_on_fail(path) as tensor:
        outcome = largest_eigenvalue(tensor, ctx.obj["settings"])

    echo(f"{outcome:{format}}")
    raise Exit(0 if outcome.converged else 2)


@main.command()
def classify(
    ctx: Context,
    path: Path = Argument(..., help="Z-tensor file", show_default=False),
    format: Format = Option(Format.text, "--format", "-f", help="report format"),
):
    """Decide whether a Z-tensor is an M-tensor

    exit code: 0 m-tensor, 1 not-m-tensor, 2 indeterminate, 3 error
    """
    with exit_on_fail(path) as tensor:
        verdict = classify_m_tensor(tensor, ctx.obj["settings"])

    echo(f"{verdict:{format}}")
    raise Exit(verdict.status.exit_code)


@main.command()
def posdef(
    ctx: Context,
    path: Path = Argument(..., help="coefficient tensor file", show_default=False),
    samples: int = Option(DEFAULT_SAMPLES, "--samples", help="sampled vectors for witnesses"),
    seed: int = Option(0, "--seed", help="sampling seed"),
    format: Format = Option(Format.text, "--format", "-f", help="report format"),
):
    """Positive definiteness of the homogeneous form of a tensor

    exit code: 0 positive-definite, 1 not-positive-definite, 2 indeterminate/inapplicable, 3 error
    """
    with exit_on_fail(path) as tensor:
        settings = replace(ctx.obj["settings"], seed=seed)
        verdict = test_positive_definite(tensor, settings, samples)

    echo(f"{verdict:{format}}")
    raise Exit(verdict.status.exit_code)


@main.command()
def bench(
    ctx: Context,
    order: Optional[int] = Option(None, "--order", "-m", help="tensor order"),
    dim: Optional[int] = Option(None, "--dim", "-n", help="tensor dimension"),
    a_d: Optional[float] = Option(None, "--ad", help="diagonal offset"),
    trials: int = Option(100, "--trials", help="tensors per row"),
    seed: int = Option(0, "--seed", help="base seed, trial t uses seed + t"),
    workers: int = Option(min(8, os.cpu_count() or 1), "--workers", help="worker threads"),
    grid: bool = Option(False, "--grid", help="run every (order, dim, ad) row of the table"),
    format: BenchFormat = Option(BenchFormat.text, "--format", "-f", help="report format"),
):
    """Classify random Z-tensors and count the verdicts"""
    settings = ctx.obj["settings"]
    with exit_on_fail():
        if grid:
            rows = list(product(GRID_ORDERS, GRID_DIMS, GRID_OFFSETS))
        elif order is None or dim is None or a_d is None:
            raise ValueError("--order, --dim and --ad are required without --grid")
        else:
            rows = [(order, dim, a_d)]

        print_header = format == BenchFormat.csv
        for m, n, ad in rows:
            row = run_bench(m, n, ad, trials, seed, settings, workers)
            if print_header:
                echo(f"{row:header}")
                print_header = False
            echo(f"{row:{format}}")


if __name__ == "__main__":  # pragma: no cover
    main()
