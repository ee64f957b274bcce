import numpy as np
import pytest

from naimark.errors import POVMValidationError
from naimark.merging import halfsum_probabilities, merge_double_dilation, merge_halfsum
from naimark.povms import random_povm, random_state, validate_povm, x_basis, z_basis


def test_halfsum_examples():
    merged = merge_halfsum(z_basis(), x_basis())
    assert len(merged) == 4
    for x in merged:
        assert np.trace(x).real == pytest.approx(0.5)
        assert np.linalg.matrix_rank(x) == 1
    assert np.linalg.norm(sum(merged) - np.eye(2)) <= 1e-15
    merged = merge_halfsum([np.eye(2)], [np.eye(2)])
    np.testing.assert_array_equal(merged[0], np.eye(2) / 2)


def test_halfsum_random(rng):
    for _ in range(10):
        P, Q = random_povm(rng, 3, 3), random_povm(rng, 3, 4)
        merged = merge_halfsum(P, Q)
        assert len(merged) == 7
        validate_povm(merged)
        assert np.linalg.norm(sum(merged) - np.eye(3)) <= 2e-9


def test_halfsum_rescaled_statistics(rng):
    P, Q = random_povm(rng, 2, 3), random_povm(rng, 2, 2)
    rho = random_state(rng, 2)
    stats = halfsum_probabilities(merge_halfsum(P, Q), rho)
    born = [np.trace(rho @ x).real for x in list(P) + list(Q)]
    np.testing.assert_allclose(stats["rescaled"], born, atol=1e-14)


def test_halfsum_invalid():
    with pytest.raises(POVMValidationError) as info:
        merge_halfsum([np.diag([1.0, -0.5]), np.diag([0.0, 1.5])], z_basis())
    assert "P" in str(info.value)
    with pytest.raises(POVMValidationError):
        merge_halfsum(z_basis(), [np.eye(3)])


def test_double_dilation_z_x():
    dd = merge_double_dilation(z_basis(), x_basis())
    assert dd.dim == 8
    assert dd.report.passed, dd.report.summary()
    assert dd.report["max_commutator"] <= 1e-12
    for a in dd.p_family:
        for b in dd.q_family:
            assert np.linalg.norm(a @ b - b @ a) <= 1e-12


def test_double_dilation_trivial_q():
    dd = merge_double_dilation(z_basis(), [np.eye(2)])
    assert dd.stage2.k == 1
    assert dd.report.passed


def test_double_dilation_same_family(rng):
    P = random_povm(rng, 2, 3)
    rho = random_state(rng, 2)
    dd = merge_double_dilation(P, P, states=[rho])
    assert dd.report.passed, dd.report.summary()
    assert len(dd.p_family) == len(dd.q_family) == 3


def test_double_dilation_random(rng):
    for _ in range(3):
        dd = merge_double_dilation(random_povm(rng, 2, 3), random_povm(rng, 2, 2), seed=int(rng.integers(100)))
        assert dd.report.passed, dd.report.summary()
        assert np.linalg.norm(sum(dd.p_family) - np.eye(dd.dim)) <= 1e-10
        assert np.linalg.norm(sum(dd.q_family) - np.eye(dd.dim)) <= 1e-10
