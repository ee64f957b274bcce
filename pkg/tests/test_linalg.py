import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from naimark.errors import PreconditionError, ShapeError
from naimark.linalg import (
    GramMetric, eigen_hermitian, hermitian_check, jacobi_eigh, tensor, w_adjoint, w_inner,
)
from naimark.povms import random_hermitian


@pytest.mark.parametrize(
    "M, expected",
    [
        ([[1, 0], [0, -1]], True),
        ([[0, 1j], [1j, 0]], False),
        ([[0, 1j], [-1j, 0]], True),
    ],
)
def test_hermitian_check_examples(M, expected):
    assert hermitian_check(np.array(M), tol=1e-9) is expected


def test_hermitian_check_rejects_non_square():
    with pytest.raises(ShapeError):
        hermitian_check(np.zeros((2, 3)))


def test_eigen_diag():
    s = eigen_hermitian(np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(s.values, [0.0, 1.0])
    assert np.allclose(np.abs(s.vectors), [[0, 1], [1, 0]])


def test_eigen_pauli_x():
    s = eigen_hermitian(np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(s.values, [-1, 1], atol=1e-15)


def test_eigen_rejects_non_hermitian():
    with pytest.raises(PreconditionError):
        eigen_hermitian(np.array([[0, 1j], [1j, 0]]))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 10])
def test_eigen_random_against_lapack(rng, n):
    for _ in range(10):
        H = random_hermitian(rng, n)
        s = eigen_hermitian(H)
        assert np.linalg.norm(s.reconstruct() - H) <= 1e-10 * (1 + np.linalg.norm(H))
        assert np.linalg.norm(s.vectors.conj().T @ s.vectors - np.eye(n)) <= 1e-10
        np.testing.assert_allclose(s.values, np.linalg.eigvalsh(H), atol=1e-12)
        assert np.all(np.diff(s.values) >= 0)


def test_eigen_degenerate_and_zero():
    s = eigen_hermitian(np.zeros((3, 3)))
    np.testing.assert_array_equal(s.values, 0)
    H = np.eye(4) * 2.5
    assert np.allclose(eigen_hermitian(H).values, 2.5)


def test_jacobi_tiny_offdiagonal_no_overflow():
    H = np.array([[1.0, 1e-200], [1e-200, 2.0]])
    with np.errstate(all="raise"):
        values, _ = jacobi_eigh(H)
    np.testing.assert_allclose(sorted(values), [1.0, 2.0])


hermitian_entries = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (2, 4, 4), elements=hermitian_entries))
def test_eigen_property(parts):
    X = parts[0] + 1j * parts[1]
    H = X + X.conj().T
    s = eigen_hermitian(H)
    assert np.linalg.norm(s.reconstruct() - H) <= 1e-10 * (1 + np.linalg.norm(H))
    assert np.linalg.norm(s.vectors.conj().T @ s.vectors - np.eye(4)) <= 1e-10


def test_tensor_examples():
    np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(tensor(np.diag([1, 0]), np.eye(2)), np.diag([1, 1, 0, 0]))


def test_tensor_index_convention(rng):
    A = random_hermitian(rng, 2) + 1j
    B = rng.normal(size=(3, 3))
    T = tensor(A, B)
    for p in range(2):
        for q in range(3):
            for r in range(2):
                for s in range(3):
                    assert T[p * 3 + q, r * 3 + s] == A[p, r] * B[q, s]


def test_tensor_trace_and_associativity(rng):
    A, B, C = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
    assert np.isclose(np.trace(tensor(A, B)), np.trace(A) * np.trace(B), atol=1e-14)
    lhs, rhs = tensor(tensor(A, B), C), tensor(A, tensor(B, C))
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(lhs)


def _random_metric(rng, n):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return GramMetric(X @ X.conj().T + n * np.eye(n))


def test_w_inner_examples(rng):
    x = rng.normal(size=4) + 1j * rng.normal(size=4)
    y = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.isclose(w_inner(x, y, GramMetric(np.eye(4))), np.vdot(x, y), atol=1e-14)
    g = GramMetric(np.diag([3 / 5, 2 / 5, 2 / 5, 3 / 5]))
    assert np.isclose(w_inner([1, 0, 1, 0], [1, 0, 1, 0], g), 1.0, atol=1e-15)


def test_w_inner_explicit_sum_and_symmetry(rng):
    g = _random_metric(rng, 4)
    for _ in range(20):
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        y = rng.normal(size=4) + 1j * rng.normal(size=4)
        direct = sum(np.conj(x[i]) * g.W[i, j] * y[j] for i in range(4) for j in range(4))
        assert abs(w_inner(x, y, g) - direct) <= 1e-12
        assert abs(w_inner(x, y, g) - np.conj(w_inner(y, x, g))) <= 1e-14 * (1 + abs(direct))


def test_w_inner_positive(rng):
    g = _random_metric(rng, 5)
    for _ in range(100):
        x = rng.normal(size=5) + 1j * rng.normal(size=5)
        v = w_inner(x, x, g)
        assert abs(v.imag) < 1e-12 and v.real > 0


def test_w_inner_dim_mismatch():
    with pytest.raises(ShapeError):
        w_inner([1, 0], [1, 0, 0], GramMetric(np.eye(3)))


def test_w_adjoint_identity_metric(rng):
    M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    np.testing.assert_allclose(w_adjoint(M, GramMetric(np.eye(3))), M.conj().T, atol=1e-15)


def test_w_adjoint_pairing_and_involution(rng):
    g = _random_metric(rng, 4)
    M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    Ma = w_adjoint(M, g)
    for _ in range(20):
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        y = rng.normal(size=4) + 1j * rng.normal(size=4)
        lhs = w_inner(x, M @ y, g)
        assert abs(lhs - w_inner(Ma @ x, y, g)) <= 1e-12 * (1 + abs(lhs))
    assert np.linalg.norm(w_adjoint(Ma, g) - M) <= 1e-12 * np.linalg.norm(M)


def test_w_adjoint_block_selector_exact():
    g = GramMetric.block_diagonal([np.diag([0.6, 0.4]), np.array([[0.4, 0.1], [0.1, 0.6]])])
    E = np.diag([0, 0, 1, 1]).astype(complex)
    assert np.array_equal(w_adjoint(E, g), E)


def test_degenerate_metric_rejected():
    from naimark.errors import MetricDegenerateError

    with pytest.raises(MetricDegenerateError):
        GramMetric(np.diag([1.0, 0.0]))
    g = GramMetric(np.diag([1.0, 1e-14]))
    with pytest.raises(MetricDegenerateError):
        w_adjoint(np.eye(2), g)
