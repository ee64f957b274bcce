"""Standard operator families, POVM validation and random generators."""

import numpy as np

from .config import DEFAULT_TOL
from .errors import POVMValidationError
from .linalg import as_observable, eigen_hermitian

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

TETRAHEDRON = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / np.sqrt(3.0)


def ket(*amps):
    v = np.asarray(amps, dtype=np.complex128)
    return v / np.linalg.norm(v)


def projector(v):
    v = np.asarray(v, dtype=np.complex128)
    return np.outer(v, v.conj())


def bloch_operator(r0, r):
    """``r0 I + r · σ`` on a qubit."""
    return r0 * np.eye(2) + sum(c * s for c, s in zip(r, PAULIS))


def tetrahedral_povm():
    """The four-outcome qubit SIC POVM ``¼(I + v_i·σ)``."""
    return [bloch_operator(0.25, 0.25 * v) for v in TETRAHEDRON]


def z_basis():
    return [projector(ket(1, 0)), projector(ket(0, 1))]


def x_basis():
    return [projector(ket(1, 1)), projector(ket(1, -1))]


def validate_povm(ops, tol=DEFAULT_TOL.povm):
    """Check Hermiticity, PSD (min eigenvalue >= -tol) and ΣE = I.

    Returns a dict of margins; raises :class:`POVMValidationError` listing
    every offending element.
    """
    if len(ops) == 0:
        raise POVMValidationError("empty operator family")
    bad = []
    margins = []
    dims = {np.shape(op) for op in ops}
    if len(dims) != 1:
        raise POVMValidationError(f"mixed operator shapes {sorted(dims)}")
    for i, op in enumerate(ops):
        try:
            op = as_observable(op, tol=max(tol, DEFAULT_TOL.hermitian))
        except ValueError as exc:
            bad.append((i, str(exc)))
            margins.append(float("nan"))
            continue
        lo = float(eigen_hermitian(op).values[0])
        margins.append(lo)
        if lo < -tol:
            bad.append((i, f"min eigenvalue {lo:.3e} < -{tol:.1e}"))
    m = ops[0].shape[0]
    residual = float(np.linalg.norm(sum(np.asarray(op) for op in ops) - np.eye(m)))
    if residual > tol:
        bad.append((None, f"identity-sum residual {residual:.3e} > {tol:.1e}"))
    if bad:
        detail = "; ".join(f"element {i}: {r}" if i is not None else r for i, r in bad)
        raise POVMValidationError(f"invalid POVM: {detail}", bad)
    return {"psd_margins": margins, "identity_residual": residual}


def is_povm(ops, tol=DEFAULT_TOL.povm):
    try:
        validate_povm(ops, tol)
    except POVMValidationError:
        return False
    return True


def random_hermitian(rng, m, scale=1.0):
    X = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return scale * (X + X.conj().T) / 2


def random_state(rng, m, rank=None):
    rank = m if rank is None else rank
    X = rng.normal(size=(m, rank)) + 1j * rng.normal(size=(m, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


def random_pure_state(rng, m):
    v = rng.normal(size=m) + 1j * rng.normal(size=m)
    return projector(v / np.linalg.norm(v))


def random_povm(rng, m, k):
    """Random full-rank POVM: ``S^{-1/2} X_i S^{-1/2}`` with ``S = ΣX_i``."""
    xs = []
    for _ in range(k):
        X = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        xs.append(X @ X.conj().T)
    S = sum(xs)
    w, U = np.linalg.eigh(S)
    inv_sqrt = (U / np.sqrt(w)) @ U.conj().T
    ops = [inv_sqrt @ X @ inv_sqrt for X in xs]
    return [(op + op.conj().T) / 2 for op in ops]


def random_family(rng, m, k, scale=1.0):
    """``k - 1`` random Hermitian operators; completion supplies the k-th."""
    return [random_hermitian(rng, m, scale) for _ in range(k - 1)]


def random_projector(rng, m, rank=1):
    X = rng.normal(size=(m, rank)) + 1j * rng.normal(size=(m, rank))
    Q, _ = np.linalg.qr(X)
    return Q @ Q.conj().T
