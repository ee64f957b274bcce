import time

import numpy as np
import pytest

from naimark.bridge import joint_distribution, sample_outcomes
from naimark.dilation import build_dilation, prepare, regularize
from naimark.errors import PreconditionError, SpanDeficientError
from naimark.estimation import (
    EstimationProblem, em, estimate_state, linear_inversion, project_to_states, traceless_basis,
)
from naimark.linalg import trace_distance
from naimark.povms import ket, projector, random_povm, random_state, tetrahedral_povm

ZERO = projector(ket(1, 0))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_traceless_basis_orthonormal(m):
    basis = traceless_basis(m)
    assert len(basis) == m * m - 1
    gram = np.array([[np.trace(a @ b).real for b in basis] for a in basis])
    np.testing.assert_allclose(gram, np.eye(m * m - 1), atol=1e-15)
    for b in basis:
        assert abs(np.trace(b)) <= 1e-15
        np.testing.assert_array_equal(b, b.conj().T)


def test_linear_inversion_exact(rng):
    p = prepare(tetrahedral_povm())
    for rho in [ZERO, np.eye(2) / 2, random_state(rng, 2)]:
        f = [np.trace(rho @ b).real for b in p.elements]
        raw, diag = linear_inversion(p.elements, f)
        assert diag["spanning"]
        assert np.linalg.norm(project_to_states(raw) - rho) <= 1e-10


def test_linear_inversion_qutrit(rng):
    p = prepare(random_povm(rng, 3, 9))
    rho = random_state(rng, 3)
    f = [np.trace(rho @ b).real for b in p.elements]
    raw, diag = linear_inversion(p.elements, f)
    assert diag["spanning"] and diag["residual"] <= 1e-12
    assert np.linalg.norm(raw - rho) <= 1e-10


def test_uninformative_family_gives_mixed_state():
    p = regularize([np.eye(2) / 2, np.eye(2) / 2])
    for method in ("linear_inversion", "em"):
        res = estimate_state(EstimationProblem(p, [10, 0], method))
        np.testing.assert_allclose(res.rho, np.eye(2) / 2, atol=1e-12)
    res = estimate_state(EstimationProblem(p, [10, 0], "linear_inversion"))
    assert res.diagnostics["spanning"] is False
    with pytest.raises(SpanDeficientError):
        estimate_state(EstimationProblem(p, [10, 0], "linear_inversion"), require_span=True)


def test_em_from_samples():
    start = time.perf_counter()
    p = prepare(tetrahedral_povm())
    jd = joint_distribution(ZERO, build_dilation(p))
    counts = sample_outcomes(jd, 10**5, 42)
    res = estimate_state(EstimationProblem(p, counts, "em"))
    assert trace_distance(res.rho, ZERO) <= 0.05
    assert res.diagnostics["monotone"]
    assert res.diagnostics["converged"]
    assert time.perf_counter() - start < 10


def test_em_loglik_monotone_random(rng):
    for _ in range(5):
        p = prepare(random_povm(rng, 3, 5))
        counts = rng.integers(0, 50, size=5)
        counts[0] += 1
        rho, diag = em(p.elements, counts / counts.sum(), max_iters=500)
        L = diag["loglik"]
        assert all(b >= a - 1e-12 for a, b in zip(L, L[1:]))
        assert abs(np.trace(rho) - 1) <= 1e-12
        assert np.linalg.eigvalsh(rho)[0] >= -1e-12


def test_em_floors_zero_probability():
    # element 0 carries no weight on |1><1|; counts there are impossible for ρ=|1><1|
    elements = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    rho, diag = em(elements, np.array([0.0, 1.0]), max_iters=50)
    assert rho[1, 1].real == pytest.approx(1.0)
    assert diag["floored"] is False
    rho, diag = em(elements, np.array([0.5, 0.5]), max_iters=50)
    np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-12)
    # a zero element with a positive count is floored, not divided by zero
    rho, diag = em([np.zeros((2, 2)), np.eye(2)], np.array([0.5, 0.5]), max_iters=50)
    assert diag["floored"] is True
    assert np.all(np.isfinite(rho))


def test_problem_validation():
    p = prepare(tetrahedral_povm())
    with pytest.raises(PreconditionError):
        EstimationProblem(p, [1, 2, 3])
    with pytest.raises(PreconditionError):
        EstimationProblem(p, [0, 0, 0, 0])
    with pytest.raises(PreconditionError):
        EstimationProblem(p, [1, 1, 1, 1], method="bayes")


def test_project_to_states():
    rho = project_to_states(np.diag([1.2, -0.2]))
    np.testing.assert_allclose(rho, np.diag([1.0, 0.0]))
    np.testing.assert_allclose(project_to_states(-np.eye(2)), np.eye(2) / 2)
