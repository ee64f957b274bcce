"""Dense complex-matrix substrate.

Hermitian checks, a cyclic Jacobi eigensolver, Kronecker products and the
weighted (Gram-matrix) inner product used on the dilated space.

Index convention for :func:`tensor`: row-major with the LEFT factor as the
slow index, i.e. ``(A ⊗ B)[p*dB + q, r*dB + s] = A[p, r] * B[q, s]``.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .errors import MetricDegenerateError, PreconditionError, ShapeError


def _square(M, name="matrix"):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {M.shape}")
    return M


def frozen(a):
    """Return a read-only copy of ``a``."""
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def hermitian_defect(M):
    M = _square(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(M - M.conj().T)))


def hermitian_check(M, tol=DEFAULT_TOL.hermitian):
    """True iff ``max |M[i,j] - conj(M[j,i])| <= tol``."""
    return hermitian_defect(M) <= tol


def as_observable(M, tol=DEFAULT_TOL.hermitian, name="observable"):
    """Validate ``M`` as a Hermitian operator and return it as complex128.

    Inputs that fail the check are rejected rather than symmetrized.
    """
    M = _square(M, name)
    if M.shape[0] < 1:
        raise ShapeError(f"{name} must have dim >= 1")
    defect = hermitian_defect(M)
    if defect > tol:
        raise PreconditionError(
            f"{name} is not Hermitian (max asymmetry {defect:.3e} > {tol:.1e})"
        )
    return M


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.conj().T


def _off_norm(A):
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return np.linalg.norm(off)


def jacobi_eigh(M, rel_tol=1e-14, max_sweeps=60):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each rotation first removes the phase of ``A[p, q]`` and then applies a
    real Givens rotation, so ``V`` stays unitary. Returns unsorted
    ``(values, V)`` with ``M ≈ V diag(values) V†``.
    """
    A = np.array(M, dtype=np.complex128)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(A)
    if n < 2 or scale == 0.0:
        return np.real(np.diagonal(A)).copy(), V
    target = rel_tol * scale
    for _ in range(max_sweeps):
        if _off_norm(A) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on (p, q)
                j_pp, j_pq = c, s
                j_qp, j_qq = -s * phase.conjugate(), c * phase.conjugate()
                col_p = A[:, p].copy()
                col_q = A[:, q]
                A[:, p] = col_p * j_pp + col_q * j_qp
                A[:, q] = col_p * j_pq + col_q * j_qq
                row_p = A[p, :].copy()
                row_q = A[q, :]
                A[p, :] = row_p * np.conj(j_pp) + row_q * np.conj(j_qp)
                A[q, :] = row_p * np.conj(j_pq) + row_q * np.conj(j_qq)
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = vp * j_pp + vq * j_qp
                V[:, q] = vp * j_pq + vq * j_qq
    return np.real(np.diagonal(A)).copy(), V


def eigen_hermitian(M, tol=DEFAULT_TOL.hermitian):
    """Eigendecomposition of a Hermitian matrix, values ascending."""
    M = as_observable(M, tol)
    values, vectors = jacobi_eigh(M)
    order = np.argsort(values, kind="stable")
    return Spectrum(frozen(values[order]), frozen(vectors[:, order]))


def eigvalsh(M):
    return eigen_hermitian(M).values


def min_eig(M):
    return float(eigen_hermitian(M).values[0])


def tensor(A, B):
    """Kronecker product with the left factor as the slow index."""
    A = _square(A, "A")
    B = _square(B, "B")
    return np.kron(A, B)


@dataclass(frozen=True, eq=False)
class GramMetric:
    """Positive-definite Hermitian Gram matrix of an inner product.

    ``blocks`` records a block-diagonal structure when known; it lets
    :func:`w_adjoint` act blockwise, which keeps scalar blocks exact.
    """

    W: np.ndarray
    blocks: tuple = None

    def __post_init__(self):
        W = as_observable(self.W, name="Gram matrix")
        object.__setattr__(self, "W", frozen(W))
        if self.blocks is not None:
            object.__setattr__(self, "blocks", tuple(frozen(b) for b in self.blocks))
        try:
            np.linalg.cholesky(W)
        except np.linalg.LinAlgError:
            raise MetricDegenerateError("Gram matrix is not positive definite") from None

    @property
    def dim(self):
        return self.W.shape[0]

    @classmethod
    def block_diagonal(cls, blocks):
        blocks = [np.asarray(b, dtype=np.complex128) for b in blocks]
        sizes = [b.shape[0] for b in blocks]
        W = np.zeros((sum(sizes), sum(sizes)), dtype=np.complex128)
        off = 0
        for b, s in zip(blocks, sizes):
            W[off:off + s, off:off + s] = b
            off += s
        return cls(W, tuple(blocks))

    def condition(self):
        return float(np.linalg.cond(self.W))


def _check_vec(x, g):
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (g.dim,):
        raise ShapeError(f"vector of shape {x.shape} does not match metric dim {g.dim}")
    return x


def w_inner(x, y, g):
    """Weighted inner product ``x† W y``."""
    x = _check_vec(x, g)
    y = _check_vec(y, g)
    return complex(x.conj() @ (g.W @ y))


def _is_scalar_identity(block):
    d = np.diagonal(block)
    return np.count_nonzero(block - np.diag(d)) == 0 and bool(np.all(d == d[0]))


def w_adjoint(M, g, max_condition=DEFAULT_TOL.max_condition):
    """Adjoint with respect to ``g``: ``W⁻¹ M† W``."""
    M = _square(M)
    if M.shape[0] != g.dim:
        raise ShapeError(f"operator dim {M.shape[0]} does not match metric dim {g.dim}")
    Mh = M.conj().T
    cond = g.condition()
    if cond > max_condition:
        raise MetricDegenerateError(f"metric condition number {cond:.3e} too large")
    if g.blocks is None:
        return np.linalg.solve(g.W, Mh @ g.W)
    sizes = [b.shape[0] for b in g.blocks]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    out = np.zeros_like(Mh)
    for i, bi in enumerate(g.blocks):
        ri = slice(offs[i], offs[i + 1])
        for j, bj in enumerate(g.blocks):
            rj = slice(offs[j], offs[j + 1])
            blk = Mh[ri, rj]
            if not np.any(blk):
                continue
            if i == j and _is_scalar_identity(blk):
                # B⁻¹ (cI) B = cI exactly
                out[ri, rj] = blk
                continue
            out[ri, rj] = np.linalg.solve(bi, blk @ bj)
    return out


def commutator_norm(A, B):
    return float(np.linalg.norm(A @ B - B @ A))


def trace_distance(rho, sigma):
    """Half the trace norm of ``rho - sigma``."""
    diff = as_observable(np.asarray(rho) - np.asarray(sigma), tol=1e-8)
    return 0.5 * float(np.sum(np.abs(eigen_hermitian(diff, tol=1e-8).values)))
