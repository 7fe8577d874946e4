import json
from dataclasses import replace
from itertools import product

import numpy as np
import pytest

from mten import NotZTensor, TensorError
from mten.classify import (
    Conclusion,
    Status,
    check_diagonal_dominance,
    classify_m_tensor,
    decompose,
    is_reducible_exact,
    is_weakly_irreducible,
    mtensor_by_decomposition,
    necessary_condition,
    positivity_probe,
    smallest_real_eigenvalue,
    sufficient_m_test,
)
from mten.core import (
    IterationSettings,
    build,
    ones_tensor,
    real_eigenvalue_bounds,
    unit_tensor,
)
from tests.conftest import ZTensors, random_z_tensor, strictly_dominant_z_tensor

SETTINGS = IterationSettings()


def z_tensors(count: int, seed: int, max_dim: int = 3):
    rng = np.random.default_rng(seed)
    for case in range(count):
        order, dim = int(rng.integers(3, 5)), int(rng.integers(2, max_dim + 1))
        yield pytest.param(random_z_tensor(rng, order, dim), id=f"{case}-m{order}-n{dim}")


def z_matrices(count: int, seed: int):
    rng = np.random.default_rng(seed)
    for case in range(count):
        dim = int(rng.integers(2, 9))
        upper = np.triu(-rng.random((dim, dim)), 1)
        matrix = upper + upper.T + np.diag(rng.uniform(-2, 10, dim))
        yield pytest.param(matrix, id=f"{case}-n{dim}")


def assert_consistent(tensor, verdict):
    """tau sits inside the real eigenvalue bounds and the status follows its sign"""
    bounds = real_eigenvalue_bounds(tensor)
    slack = 1e-8 * (1 + abs(bounds.upper))
    assert bounds.lower - slack <= verdict.tau <= bounds.upper + slack
    if verdict.status == Status.m_tensor:
        assert verdict.tau > verdict.guard_band
    elif verdict.status == Status.not_m_tensor:
        assert verdict.tau < -verdict.guard_band
    if verdict.status != Status.indeterminate:
        assert verdict.residual <= 100 * SETTINGS.tol
    if verdict.status == Status.m_tensor:
        assert necessary_condition(tensor)


def test_fixtures(z_known: ZTensors):
    verdict = classify_m_tensor(z_known.tensor, SETTINGS)
    assert verdict.tau == pytest.approx(z_known.tau, abs=1e-8)
    assert verdict.status == (Status.m_tensor if z_known.tau > 0 else Status.not_m_tensor)
    assert verdict.residual <= 1e-8
    assert verdict.spectral.converged
    assert_consistent(z_known.tensor, verdict)


def test_Q(Q):
    verdict = classify_m_tensor(Q, SETTINGS)
    assert verdict.status == Status.m_tensor
    assert verdict.upper == 7
    assert (verdict.bounds.lower, verdict.bounds.upper) == (1, 7)
    assert verdict.eigenvector == pytest.approx([0.5, 0.5])
    assert verdict.spectral.iterations == 1


def test_smallest_real_eigenvalue(Q):
    tau, vector = smallest_real_eigenvalue(Q, SETTINGS)
    assert tau == pytest.approx(1, abs=1e-12)
    assert vector == pytest.approx([0.5, 0.5])


@pytest.mark.parametrize("matrix", z_matrices(200, seed=42))
def test_matrix_oracle(matrix):
    settings = replace(SETTINGS, max_iter=200_000)
    verdict = classify_m_tensor(build(2, len(matrix), matrix), settings)
    oracle = np.linalg.eigvalsh(matrix).min()

    assert verdict.spectral.converged
    assert verdict.tau == pytest.approx(oracle, abs=1e-8)
    if oracle > verdict.guard_band:
        assert verdict.status == Status.m_tensor
    elif oracle < -verdict.guard_band:
        assert verdict.status == Status.not_m_tensor


@pytest.mark.parametrize("tensor", z_tensors(50, seed=7))
def test_shift_paths(tensor):
    verdict = classify_m_tensor(tensor, SETTINGS)
    assert_consistent(tensor, verdict)

    shifted = classify_m_tensor(tensor, SETTINGS, offset=5)
    assert shifted.upper == verdict.upper + 5
    assert shifted.tau == pytest.approx(verdict.tau, abs=1e-8)

    sigma = classify_m_tensor(tensor, replace(SETTINGS, sigma=10))
    assert sigma.tau == pytest.approx(verdict.tau, abs=1e-8)


@pytest.mark.parametrize("tensor", z_tensors(50, seed=8))
def test_decomposition_agrees(tensor):
    verdict = classify_m_tensor(tensor, SETTINGS)
    gap = mtensor_by_decomposition(tensor, SETTINGS)
    if verdict.status == Status.m_tensor:
        assert gap > 0
    elif verdict.status == Status.not_m_tensor:
        assert gap < 0


def test_decompose(Q):
    decomposition = decompose(Q, 5)
    assert decomposition.s == 5
    assert decomposition.nonnegative == build(3, 2, [1, 1, 1, 1, 1, 1, 1, 1])
    assert decomposition.reconstruct() == Q
    assert decomposition.spectral_gap(SETTINGS) == pytest.approx(1)

    decomposition = decompose(Q, 4)
    assert decomposition.nonnegative == build(3, 2, [0, 1, 1, 1, 1, 1, 1, 0])
    assert decomposition.reconstruct() == Q


def test_decompose_errors(Q):
    with pytest.raises(TensorError) as e:
        decompose(Q, 3)
    assert "below the max diagonal entry 4" in str(e.value)
    with pytest.raises(NotZTensor):
        decompose(unit_tensor(2, 2) + build(2, 2, [0, 1, 0, 0]), 5)


@pytest.mark.parametrize(
    "tensor,offset,error",
    [
        pytest.param(build(2, 2, [1, 0.5, 0, 1]), 0, NotZTensor, id="not Z"),
        pytest.param(build(2, 2, [1, -0.5, 0, 1]), -1, ValueError, id="offset"),
    ],
)
def test_classify_errors(tensor, offset, error):
    with pytest.raises(error):
        classify_m_tensor(tensor, SETTINGS, offset)


@pytest.mark.parametrize(
    "entries",
    [
        pytest.param([1, -1, -1, 1], id="singular matrix"),
        pytest.param([3, -1, -1, -1, -1, -1, -1, 3], id="singular m=3"),
    ],
)
def test_guard_band(entries, caplog):
    order = 2 if len(entries) == 4 else 3
    verdict = classify_m_tensor(build(order, 2, entries), SETTINGS)
    assert verdict.status == Status.indeterminate
    assert abs(verdict.tau) <= verdict.guard_band
    assert "indeterminate" in caplog.text


def test_epsilon_guard_band(Q):
    verdict = classify_m_tensor(Q, replace(SETTINGS, epsilon=1e-6))
    assert verdict.guard_band == pytest.approx(1e-6 * 4)
    assert verdict.status == Status.m_tensor


def test_no_convergence():
    tensor = random_z_tensor(np.random.default_rng(3), 3, 4)
    verdict = classify_m_tensor(tensor, IterationSettings(max_iter=1, fallback=False))
    assert not verdict.spectral.converged
    assert verdict.status == Status.indeterminate


def test_verdict_format(Q):
    verdict = classify_m_tensor(Q, SETTINGS)
    report = json.loads(f"{verdict:json}")
    assert report["status"] == "m-tensor"
    assert report["tau"] == pytest.approx(1)
    assert report["upper_bound"] == 7
    assert report["converged"] is True

    text = f"{verdict}"
    assert text.startswith("status: m-tensor\ntau: 1\n")
    with pytest.raises(ValueError):
        f"{verdict:csv}"


@pytest.mark.parametrize(
    "status,code",
    [(Status.m_tensor, 0), (Status.not_m_tensor, 1), (Status.indeterminate, 2)],
)
def test_exit_code(status, code):
    assert status.exit_code == code


def test_necessary_condition(Q):
    assert necessary_condition(Q)
    assert not necessary_condition(-unit_tensor(3, 2))
    assert not necessary_condition(build(2, 2, [0, -1, -1, 0]))


@pytest.mark.parametrize(
    "tensor,x,positive",
    [
        pytest.param(ZTensors.Q.tensor, (1, 1), True, id="Q"),
        pytest.param(ZTensors.Q_NOT.tensor, (1, 1), False, id="Q_NOT"),
        pytest.param(ZTensors.MATRIX.tensor, (1, 0), False, id="boundary"),
        pytest.param(unit_tensor(3, 2), (1, 2), True, id="unit"),
    ],
)
def test_positivity_probe(tensor, x, positive):
    assert positivity_probe(tensor, x) is positive


def test_positivity_probe_negative_x(Q):
    with pytest.raises(TensorError):
        positivity_probe(Q, (1, -1))


@pytest.mark.parametrize(
    "entries,dominant,strictly,rows",
    [
        pytest.param([4, -1, -1, -1, -1, -1, -1, 4], True, True, [1, 2], id="Q"),
        pytest.param([3, -1, -1, -1, -1, -1, -1, 3], True, False, [], id="4I-E"),
        pytest.param([2, -1, -1, -1, -1, -1, -1, 2], False, False, [], id="3I-E"),
        pytest.param([1, 0, 0, 0, 0, 0, 0, 1], True, True, [1, 2], id="unit"),
        pytest.param([2, -1, -1, -1, -1, -1, -1, 4], False, False, [2], id="mixed"),
    ],
)
def test_diagonal_dominance(entries, dominant, strictly, rows):
    report = check_diagonal_dominance(build(3, 2, entries))
    assert report.diagonally_dominant is dominant
    assert report.strictly_dominant is strictly
    assert report.rows_strict == rows
    assert report.strict_row_exists is bool(rows)
    assert report.diagonal_nonnegative


def strictly_dominant_cases(count: int):
    rng = np.random.default_rng(35)
    for case in range(count):
        order, dim = int(rng.integers(3, 5)), int(rng.integers(2, 6))
        yield pytest.param(strictly_dominant_z_tensor(rng, order, dim), id=f"{case}-m{order}-n{dim}")


@pytest.mark.parametrize("tensor", strictly_dominant_cases(100))
def test_strictly_dominant(tensor):
    report = sufficient_m_test(tensor)
    assert report.conclusion == Conclusion.proven
    assert not report.proxy_used
    assert classify_m_tensor(tensor, SETTINGS).status == Status.m_tensor


@pytest.mark.parametrize("tensor", z_tensors(50, seed=9))
def test_sufficient_never_contradicts(tensor):
    if sufficient_m_test(tensor).conclusion == Conclusion.proven:
        assert classify_m_tensor(tensor, SETTINGS).status == Status.m_tensor


@pytest.mark.parametrize(
    "matrix,conclusion",
    [
        pytest.param([[1, -1], [-1, 2]], Conclusion.proven, id="irreducible"),
        pytest.param([[1, -1], [0, 1]], Conclusion.none, id="reducible"),
        pytest.param(
            [[1, -1, 0], [-1, 1, 0], [0, 0, 2]], Conclusion.none, id="reducible block"
        ),
        pytest.param([[1, -1], [-1, 1]], Conclusion.none, id="no strict row"),
        pytest.param([[-1, 0], [0, 2]], Conclusion.none, id="negative diagonal"),
        pytest.param([[1, 0.5], [0, 2]], Conclusion.none, id="not Z"),
    ],
)
def test_sufficient_m_test(matrix, conclusion):
    tensor = build(2, len(matrix), matrix)
    assert sufficient_m_test(tensor).conclusion == conclusion
    if conclusion == Conclusion.proven:
        assert classify_m_tensor(tensor, SETTINGS).status == Status.m_tensor


def irreducibly_dominant(order: int, dim: int) -> np.ndarray:
    """E-shaped Z-tensor: slice sums of |off-diagonal| equal the diagonal except in slice 1"""
    entries = -np.ones(dim**order)
    stride = sum(dim**k for k in range(order))
    diagonal = np.arange(dim) * stride
    entries[diagonal] = dim**order / dim - 1
    entries[0] += 1
    return build(order, dim, entries)


@pytest.mark.parametrize("order,dim", [(3, 3), (4, 2), (3, 5)])
def test_proxy(order, dim):
    tensor = irreducibly_dominant(order, dim)
    exact = sufficient_m_test(tensor)
    assert exact == (Conclusion.proven, False)

    proxy = sufficient_m_test(tensor, exact_limit=1)
    assert proxy == (Conclusion.proven, True)
    assert classify_m_tensor(tensor, SETTINGS).status == Status.m_tensor


def brute_force_reducible(tensor, subset) -> bool:
    rest = [i for i in range(tensor.dim) if i not in subset]
    return all(
        tensor.array[(i,) + others] == 0
        for i in subset
        for others in product(rest, repeat=tensor.order - 1)
    )


def sparse_tensors(count: int):
    rng = np.random.default_rng(17)
    for case in range(count):
        order, dim = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        density = rng.choice([0.05, 0.15, 0.5])
        entries = -rng.random(dim**order) * (rng.random(dim**order) < density)
        yield pytest.param(build(order, dim, entries), id=f"{case}-m{order}-n{dim}")


@pytest.mark.parametrize("tensor", sparse_tensors(60))
def test_is_reducible_exact(tensor):
    witness = is_reducible_exact(tensor)
    subsets = [
        frozenset(i for i in range(tensor.dim) if mask >> i & 1)
        for mask in range(1, 2**tensor.dim - 1)
    ]
    reducible = [s for s in subsets if brute_force_reducible(tensor, s)]

    if witness is None:
        assert not reducible
        assert is_weakly_irreducible(tensor)
    else:
        zero_based = frozenset(i - 1 for i in witness)
        assert zero_based in reducible
        assert len(witness) == min(len(s) for s in reducible)


def test_is_reducible_exact_limit():
    with pytest.raises(TensorError) as e:
        is_reducible_exact(unit_tensor(2, 5), exact_limit=4)
    assert "exceeds the exact enumeration limit 4" in str(e.value)


@pytest.mark.parametrize(
    "tensor,witness",
    [
        pytest.param(unit_tensor(3, 2), {1}, id="unit"),
        pytest.param(build(2, 3, [[1, 0, 0], [1, 1, 0], [1, 1, 1]]), {1}, id="lower"),
        pytest.param(build(2, 3, [[1, 1, 0], [1, 1, 0], [1, 1, 1]]), {1, 2}, id="block"),
        pytest.param(build(2, 2, [[0, 1], [1, 0]]), None, id="cycle"),
    ],
)
def test_is_reducible_exact_examples(tensor, witness):
    result = is_reducible_exact(tensor)
    assert result == (None if witness is None else frozenset(witness))


def test_weakly_irreducible_but_reducible():
    # A_112 and A_221 connect 1 -> 2 -> 1, but A_122 = 0 leaves {1} closed
    entries = np.zeros(8)
    entries[[1, 6]] = -1
    tensor = build(3, 2, entries)
    assert is_weakly_irreducible(tensor)
    assert is_reducible_exact(tensor) == frozenset({1})


@pytest.mark.parametrize(
    "matrix,connected",
    [
        pytest.param([[0, 1], [1, 0]], True, id="cycle"),
        pytest.param([[1, 1], [0, 1]], False, id="triangular"),
        pytest.param([[0, 1, 0], [0, 0, 1], [1, 0, 0]], True, id="3-cycle"),
    ],
)
def test_is_weakly_irreducible(matrix, connected):
    assert is_weakly_irreducible(build(2, len(matrix), matrix)) is connected


@pytest.mark.parametrize(
    "tensor,connected",
    [
        pytest.param(ones_tensor(3, 2), True, id="ones"),
        pytest.param(unit_tensor(3, 2), False, id="unit"),
        pytest.param(ZTensors.Q.tensor, True, id="Q"),
    ],
)
def test_is_weakly_irreducible_tensors(tensor, connected):
    assert is_weakly_irreducible(tensor) is connected
    if connected:
        assert is_reducible_exact(tensor) is None


@pytest.mark.parametrize(
    "tensor,conclusion",
    [
        pytest.param(ZTensors.Q.tensor, Conclusion.proven, id="Q"),
        pytest.param(ZTensors.Q_NOT.tensor, Conclusion.none, id="Q_NOT"),
        pytest.param(ones_tensor(3, 2), Conclusion.none, id="not Z"),
    ],
)
def test_sufficient_m_test_tensors(tensor, conclusion):
    assert sufficient_m_test(tensor).conclusion == conclusion
