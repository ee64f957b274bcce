"""Naimark components, the expanded base space and the product property.

Two compressions of a dilated operator live here and are deliberately kept
separate: :func:`component` (top-left block in a W-orthonormal basis that
starts with the embedded base copy) and :func:`compress_G` (``GUG`` on the
range of the base-space projector after padding the base to ``t = mk``).
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .dilation import (
    DilatedOperator,
    RegularizedPOVM,
    _entries,
    build_dilation,
    embed_vector,
    resolve_general,
)
from .errors import NullEventError, PreconditionError, ShapeError
from .linalg import as_observable, frozen
from .reports import Report


@dataclass(frozen=True, eq=False)
class ModelBasis:
    T: np.ndarray
    T_inv: np.ndarray

    @property
    def n(self):
        return self.T.shape[0]


def build_model_basis(d):
    """W-orthonormal basis whose first m columns are the embedded ``e_a``.

    Remaining columns come from the standard basis, least colinear with the
    embedded copy first, via modified Gram–Schmidt in the W inner product
    (applied twice).
    """
    W = d.W
    n, m = d.n, d.m
    head = np.stack([embed_vector(np.eye(m)[a], d) for a in range(m)], axis=1)
    cand = np.eye(n, dtype=np.complex128)
    # squared W-norm of each candidate's projection onto span{ẽ_a}
    overlap = np.sum(np.abs(head.conj().T @ W @ cand) ** 2, axis=0)
    order = np.argsort(overlap, kind="stable")
    cols = [head[:, a] for a in range(m)]
    wcols = [W @ u for u in cols]
    for c in order:
        if len(cols) == n:
            break
        v = cand[:, c].copy()
        for _ in range(2):
            for u, wu in zip(cols, wcols):
                v = v - u * (wu.conj() @ v)
        norm = np.sqrt(max((v.conj() @ W @ v).real, 0.0))
        if norm < 1e-8:
            continue
        cols.append(v / norm)
        wcols.append(W @ cols[-1])
    T = np.stack(cols, axis=1)
    T[:, :m] = head
    return ModelBasis(frozen(T), frozen(T.conj().T @ W))


def component(U, mb, m):
    """Top-left ``m × m`` block of ``T⁻¹ U T``."""
    U = _entries(U)
    if U.shape != (mb.n, mb.n):
        raise ShapeError(f"operator of shape {U.shape} does not act on a dim-{mb.n} space")
    return (mb.T_inv @ U @ mb.T)[:m, :m]


@dataclass(frozen=True, eq=False)
class ExpandedSpace:
    """Base space padded from m to ``t = mk`` and dilated again (dim ``mk²``)."""

    m: int
    k: int
    Z: np.ndarray
    G: np.ndarray
    expanded_povm: RegularizedPOVM
    dilation: object
    base: RegularizedPOVM

    @property
    def t(self):
        return self.m * self.k

    @property
    def n(self):
        return self.t * self.k

    def range_indices(self):
        """Dilated coordinates spanning range(G): the base corner of every block."""
        return np.concatenate([np.arange(i * self.t, i * self.t + self.m) for i in range(self.k)])

    def lift(self, coefficients):
        """``Σ α_i E_i`` on the expanded dilation."""
        return self.dilation.element(coefficients)


def _pad(B, t, fill):
    m = B.shape[0]
    out = np.zeros((t, t), dtype=np.complex128)
    out[:m, :m] = B
    out[m:, m:] = fill * np.eye(t - m)
    return out


def build_expanded(p, tol=DEFAULT_TOL):
    """Pad every element into the corner of an order-``mk`` operator.

    The complement receives ``I/k`` in each element, which keeps positive
    definiteness and the resolution of the identity. Padding the originals
    with the same ``I/k`` keeps the shift relation intact.
    """
    m, k = p.m, p.k
    t = m * k
    elements = [_pad(b, t, 1.0 / k) for b in p.elements]
    originals = [_pad(b, t, 1.0 / k) for b in p.originals]
    expanded = RegularizedPOVM(t, k, tuple(elements), p.shift, tuple(originals), p.completed)
    dil = build_dilation(expanded, tol)
    Z = np.zeros((t, t))
    Z[:m, :m] = np.eye(m)
    # blocks are environment-major, so G acts as Z inside every block
    G = np.kron(np.eye(k), Z)
    return ExpandedSpace(m, k, frozen(Z), frozen(G), expanded, dil, p)


def compress_G(U, e):
    """``GUG`` restricted to the ``mk``-dimensional range of G."""
    U = _entries(U)
    if U.shape != (e.n, e.n):
        raise ShapeError(f"operator of shape {U.shape} does not act on the expanded dilation (dim {e.n})")
    idx = e.range_indices()
    return U[np.ix_(idx, idx)]


def verify_expanded(e, tol=DEFAULT_TOL):
    report = Report("expanded_space")
    report.info("t", e.t)
    report.info("n", e.n)
    report.bound("Z_idempotent", float(np.max(np.abs(e.Z @ e.Z - e.Z))), 0.0)
    report.bound("G_idempotent", float(np.max(np.abs(e.G @ e.G - e.G))), 0.0)
    report.info("rank_Z", int(np.linalg.matrix_rank(e.Z)))
    report.info("rank_G", int(np.linalg.matrix_rank(e.G)))
    comm = max(float(np.max(np.abs(e.G @ E - E @ e.G))) for E in e.dilation.projectors)
    report.bound("G_commutes_with_E", comm, 0.0)
    # (G)_H on the expanded model basis: the base corner of G is I_m
    mb = build_model_basis(e.dilation)
    gh = component(e.G, mb, e.t)
    report.info("G_component_vs_Z", float(np.linalg.norm(gh - e.Z)))
    return report


def verify_born_preservation(X, U0, d, mb, tol=DEFAULT_TOL):
    """Compare the Born-probability expressions around a resolved observable.

    Only ``tr[X (Ũ_0)_H] = tr[X U_0]`` is certified; the two tensor-product
    pairings are reported as data.
    """
    X = as_observable(X, tol.hermitian, name="X")
    U0 = as_observable(U0, tol.hermitian, name="U_0")
    Ut = resolve_general(U0, d.source, tol).entries
    # X ⊗ I and X ⊗ P̄ in environment-major coordinates
    x_id = np.kron(np.eye(d.k), X)
    x_pbar = np.kron(d.p_bar, X)
    base = np.trace(X @ U0)
    comp = np.trace(X @ component(Ut, mb, d.m))
    vals = {
        "tr_XI_U": np.trace(x_id @ Ut),
        "tr_XPbar_U": np.trace(x_pbar @ Ut),
        "tr_X_UH": comp,
        "tr_X_U0": base,
    }
    report = Report("born_preservation")
    for name, v in vals.items():
        report.info(name, complex(v))
    names = list(vals)
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            if {names[a], names[b]} == {"tr_X_UH", "tr_X_U0"}:
                continue
            report.info(f"dev_{names[a]}__{names[b]}", abs(vals[names[a]] - vals[names[b]]))
    report.bound("dev_tr_X_UH__tr_X_U0", abs(comp - base), tol.born)
    return report


def conditional_observables(A, B, D, tol=DEFAULT_TOL):
    """Lüders-rule conditionals.

    Returns ``(C_AB, C_BA, pr_AB, pr_BA)`` with ``C_AB = BAB / tr[DB]`` and
    ``pr_AB = tr[BDBA] / tr[DB]``.
    """
    A = as_observable(A, tol.hermitian, name="A")
    B = as_observable(B, tol.hermitian, name="B")
    D = as_observable(D, tol.hermitian, name="D")
    if not A.shape == B.shape == D.shape:
        raise ShapeError("A, B and D must share one dimension")
    if abs(np.trace(D) - 1) > tol.state:
        raise PreconditionError("D must have unit trace")
    tDB = np.trace(D @ B).real
    tDA = np.trace(D @ A).real
    if tDB <= 1e-12 or tDA <= 1e-12:
        raise NullEventError(
            f"conditioning event has probability tr[DB]={tDB:.3e}, tr[DA]={tDA:.3e}"
        )
    C_AB = B @ A @ B / tDB
    C_BA = A @ B @ A / tDA
    pr_AB = np.trace(B @ D @ B @ A).real / tDB
    pr_BA = np.trace(A @ D @ A @ B).real / tDA
    return C_AB, C_BA, pr_AB, pr_BA


def conditional_in_range(pr, slack=1e-12):
    """Flag for reports: conditionals of projector pairs must lie in [0, 1]."""
    return -slack <= pr <= 1 + slack
