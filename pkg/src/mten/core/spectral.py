"""
Largest eigenvalue of nonnegative tensors

NOTE:
- the iteration runs on B = A + sigma I (+ epsilon E) and brackets rho(B)
  between the min and max of (B x^{m-1})_i / x_i^{m-1}
- the reported eigenvalue is the bracket midpoint minus sigma
- B is divided by the power of two that brings max|A| below 1, which is exact
"""

import numpy as np

from mten import NotNonnegative, SpectralOverflow, TensorError, ZeroIterate, logger

from .tensor import (
    DenseTensor,
    Vector,
    apply_contraction,
    as_vector,
    hadamard_power,
    is_nonnegative,
    offdiagonal,
    shift_combine,
)
from .types import Bracket, EigenvalueBounds, IterationSettings, SpectralOutcome


def perturb(tensor: DenseTensor, epsilon: float) -> DenseTensor:
    """A + epsilon E, with E the all-ones tensor"""
    if epsilon == 0:
        return tensor
    return DenseTensor(tensor.order, tensor.dim, tensor.entries + epsilon)


def _check_nonnegative(tensor: DenseTensor) -> None:
    if not is_nonnegative(tensor):
        raise NotNonnegative("tensor has negative entries")


def cw_bracket(tensor: DenseTensor, x: Vector) -> Bracket:
    """Collatz-Wielandt bounds on the spectral radius at a positive x"""
    _check_nonnegative(tensor)
    vec = as_vector(tensor, x)
    if not (vec > 0).all():
        raise TensorError("x must be strictly positive")

    quotients = apply_contraction(tensor, vec) / hadamard_power(vec, tensor.order - 1)
    return Bracket(float(quotients.min()), float(quotients.max()))


def row_sum_bounds(tensor: DenseTensor) -> Bracket:
    """min/max slice sums, the Collatz-Wielandt bracket at x = (1, ..., 1)"""
    return cw_bracket(tensor, np.ones(tensor.dim))


def real_eigenvalue_bounds(tensor: DenseTensor) -> EigenvalueBounds:
    """Gershgorin-type interval holding every real eigenvalue"""
    sums = np.abs(offdiagonal(tensor)).reshape(tensor.dim, -1).sum(axis=1)
    diagonal = tensor.diagonal()
    return EigenvalueBounds(
        lower=float((diagonal - sums).min()),
        upper=float((diagonal + sums).max()),
        offdiag_row_sums=sums,
    )


def residual(tensor: DenseTensor, eigenvalue: float, x: Vector) -> float:
    """inf-norm of A x^{m-1} - eigenvalue x^{[m-1]}, over max(1, |x|_inf)^{m-1}"""
    vec = as_vector(tensor, x)
    scale = float(np.abs(vec).max())
    if scale == 0:
        raise TensorError("x must be nonzero")

    defect = apply_contraction(tensor, vec) - eigenvalue * hadamard_power(vec, tensor.order - 1)
    return float(np.abs(defect).max() / max(1.0, scale) ** (tensor.order - 1))


def _scale_exponent(tensor: DenseTensor) -> int:
    """power of two that brings max|A| into [0.5, 1), 0 when max|A| <= 1"""
    largest = float(np.abs(tensor.entries).max())
    if largest <= 1:
        return 0
    return int(np.frexp(largest)[1])


def _power_iteration(
    tensor: DenseTensor, settings: IterationSettings, epsilon: float
) -> SpectralOutcome:
    # iterate on B / 2**exponent, exact in floating point: contractions of a
    # 1-norm unit vector stay below 1 + (sigma + epsilon) / 2**exponent
    order, sigma = tensor.order, settings.sigma
    exponent = _scale_exponent(tensor)
    scaled = DenseTensor(order, tensor.dim, np.ldexp(tensor.entries, -exponent))
    shift, unit = np.ldexp(sigma, -exponent), np.ldexp(1.0, -exponent)
    shifted = perturb(shift_combine(1, scaled, shift), np.ldexp(epsilon, -exponent))
    x = np.full(tensor.dim, 1 / tensor.dim)
    logger.debug(
        f"power iteration: order {order}, dim {tensor.dim}, sigma {sigma}, "
        f"epsilon {epsilon}, scale 2**{exponent}"
    )

    converged = False
    for iteration in range(1, settings.max_iter + 1):
        y = apply_contraction(shifted, x)
        xm = hadamard_power(x, order - 1)
        positive = xm > 0
        # y >= sigma x^[m-1] > 0 unless the iterate underflows
        if not positive.any() or not (y > 0).any():
            raise ZeroIterate(f"zero iterate at iteration {iteration}, use epsilon > 0")

        quotients = y[positive] / xm[positive]
        bracket = Bracket(float(quotients.min()), float(quotients.max()))
        if bracket.width <= settings.tol * (unit + abs(bracket.midpoint - shift)):
            converged = True
            break
        if iteration == settings.max_iter:
            break

        z = hadamard_power(y, 1 / (order - 1))
        x = z / z.sum()

    final = Bracket(
        float(np.ldexp(bracket.lower, exponent)), float(np.ldexp(bracket.upper, exponent))
    )
    if not np.isfinite(final).all():
        raise SpectralOverflow(
            f"spectral radius exceeds the float range, bracket [{bracket.lower!r}, "
            f"{bracket.upper!r}] times 2**{exponent}"
        )

    logger.debug(
        f"iteration {iteration}: bracket [{final.lower!r}, {final.upper!r}], "
        f"{'converged' if converged else 'not converged'}"
    )
    return SpectralOutcome(
        eigenvalue=final.midpoint - sigma,
        eigenvector=x,
        iterations=iteration,
        final_bracket=final,
        residual=float(np.ldexp(residual(shifted, bracket.midpoint, x), exponent)),
        converged=converged,
        epsilon_used=epsilon,
        sigma=sigma,
    )


def largest_eigenvalue(
    tensor: DenseTensor, settings: IterationSettings = IterationSettings()
) -> SpectralOutcome:
    """Spectral radius and Perron vector of a nonnegative tensor

    With settings.fallback, a solve with epsilon = 0 that does not converge
    (or whose iterate underflows to zero) is restarted once on A + epsilon E,
    epsilon = 1e-12 max(1, max|A|). The perturbation overestimates the
    spectral radius by at most epsilon_used * n**(m-1).
    Raises SpectralOverflow when the spectral radius exceeds the float range.
    """
    _check_nonnegative(tensor)
    can_fall_back = settings.fallback and settings.epsilon == 0

    outcome = None
    try:
        outcome = _power_iteration(tensor, settings, settings.epsilon)
    except ZeroIterate as e:
        if not can_fall_back:
            raise
        logger.debug(e)

    if outcome is None or (not outcome.converged and can_fall_back):
        epsilon = 1e-12 * max(1.0, float(np.abs(tensor.entries).max()))
        logger.info(f"restart power iteration with epsilon {epsilon:.3g}")
        outcome = _power_iteration(tensor, settings, epsilon)

    if not outcome.converged:
        logger.warning(
            f"no convergence after {outcome.iterations} iterations, "
            f"bracket width {outcome.final_bracket.width:.3g}"
        )
    return outcome
