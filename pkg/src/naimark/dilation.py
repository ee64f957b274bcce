"""Dilation of an arbitrary finite observable family to commuting projectors.

Pipeline: :func:`complete_to_identity` appends ``I - ΣB_i`` when needed,
:func:`regularize` shifts and rescales to a positive-definite resolution of
the identity, and :func:`build_dilation` forms the space ``H ⊗ H_E`` with
Gram matrix ``W = blockdiag(B̃_1, ..., B̃_k)``.

Coordinates on the dilated space put the environment index slow and the
base index fast: component ``(i, a)`` sits at ``i*m + a``. In these
coordinates ``E_i = P_i ⊗ I_m`` is the selector of block ``i``. Outcome
indices are 0-based throughout.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .errors import MetricDegenerateError, PreconditionError, ShapeError, SpanDeficientError
from .linalg import GramMetric, as_observable, eigen_hermitian, frozen
from .reports import Report


@dataclass(frozen=True, eq=False)
class RegularizedPOVM:
    """Positive-definite family ``B̃_i = (B_i + aI)/(1 + ka)`` summing to I."""

    m: int
    k: int
    elements: tuple
    shift: float
    originals: tuple
    completed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(frozen(e) for e in self.elements))
        object.__setattr__(self, "originals", tuple(frozen(e) for e in self.originals))

    @property
    def scale(self):
        """The normalizer ``1 + k a``."""
        return 1.0 + self.k * self.shift


@dataclass(frozen=True, eq=False)
class DilationSpace:
    m: int
    k: int
    metric: GramMetric
    projectors: tuple
    omega_bar: np.ndarray
    p_bar: np.ndarray
    source: RegularizedPOVM

    @property
    def n(self):
        return self.m * self.k

    @property
    def W(self):
        return self.metric.W

    def stacking(self):
        """The ``n × m`` matrix of the embedding ``φ ↦ φ ⊗ ω̄``."""
        return np.kron(np.ones((self.k, 1)), np.eye(self.m)).astype(np.complex128)

    def element(self, coefficients):
        """``Σ α_i E_i`` as a :class:`DilatedOperator`."""
        return DilatedOperator.in_span(coefficients, self.m)

    def identity(self):
        return self.element(np.ones(self.k))


@dataclass(frozen=True, eq=False)
class DilatedOperator:
    """Operator on the dilated space, tagged when it lies in span{E_i}."""

    entries: np.ndarray
    in_naimark_space: bool = False
    coefficients: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "entries", frozen(np.asarray(self.entries, dtype=np.complex128)))
        if self.coefficients is not None:
            object.__setattr__(self, "coefficients", frozen(np.asarray(self.coefficients)))

    @classmethod
    def in_span(cls, coefficients, m):
        c = np.asarray(coefficients)
        entries = np.kron(np.diag(c), np.eye(m))
        return cls(entries, True, c)

    @property
    def n(self):
        return self.entries.shape[0]

    def _combine(self, other, op):
        if isinstance(other, DilatedOperator):
            entries = op(self.entries, other.entries)
            if self.in_naimark_space and other.in_naimark_space:
                return DilatedOperator(entries, True, op(self.coefficients, other.coefficients))
            return DilatedOperator(entries)
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, scalar):
        if isinstance(scalar, DilatedOperator):
            return NotImplemented
        c = None if self.coefficients is None else scalar * self.coefficients
        return DilatedOperator(scalar * self.entries, self.in_naimark_space, c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, DilatedOperator):
            return NotImplemented
        entries = self.entries @ other.entries
        if self.in_naimark_space and other.in_naimark_space:
            # E_i E_j = δ_ij E_i
            return DilatedOperator(entries, True, self.coefficients * other.coefficients)
        return DilatedOperator(entries)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def _entries(U):
    return U.entries if isinstance(U, DilatedOperator) else np.asarray(U, dtype=np.complex128)


def naimark_coefficients(M, m, k):
    """Coefficients ``α`` with ``M = Σ α_i E_i`` exactly, or None."""
    M = _entries(M)
    if M.shape != (m * k, m * k):
        raise ShapeError(f"expected {(m * k, m * k)} operator, got {M.shape}")
    alpha = np.diagonal(M)[::m].copy()
    if np.array_equal(M, np.kron(np.diag(alpha), np.eye(m))):
        return alpha
    return None


def complete_to_identity(bs, tol=DEFAULT_TOL.completion):
    """Append ``I - ΣB_i`` unless the family already resolves the identity."""
    if len(bs) == 0:
        raise PreconditionError("cannot complete an empty operator family")
    bs = [as_observable(b, name=f"B[{i}]") for i, b in enumerate(bs)]
    m = bs[0].shape[0]
    if any(b.shape != (m, m) for b in bs):
        raise ShapeError("operators in a family must share one dimension")
    rest = np.eye(m) - sum(bs)
    if np.linalg.norm(rest) > tol:
        return bs + [rest]
    return bs


def regularize(bs, margin=DEFAULT_TOL.margin, shift=None, completed=False, tol=DEFAULT_TOL):
    """Shift and rescale a completed family to positive-definite elements.

    With ``shift=None`` the shift is 0 when every element already has
    minimum eigenvalue at least ``tol.min_eig_floor``; otherwise it is
    ``(1 + margin) * max |λ|`` over all eigenvalues of all elements.
    """
    bs = [as_observable(b, tol.hermitian, name=f"B[{i}]") for i, b in enumerate(bs)]
    if not bs:
        raise PreconditionError("empty operator family")
    m, k = bs[0].shape[0], len(bs)
    residual = np.linalg.norm(sum(bs) - np.eye(m))
    if residual > tol.identity_sum:
        raise PreconditionError(
            f"family must sum to the identity (residual {residual:.3e}); "
            "run complete_to_identity first"
        )
    spectra = [eigen_hermitian(b, tol.hermitian).values for b in bs]
    if shift is None:
        if min(s[0] for s in spectra) >= tol.min_eig_floor:
            shift = 0.0
        else:
            shift = (1.0 + margin) * max(float(np.max(np.abs(s))) for s in spectra)
    shift = float(shift)
    if shift < 0:
        raise PreconditionError(f"shift must be non-negative, got {shift}")
    if shift == 0.0:
        elements = [b.copy() for b in bs]
    else:
        elements = [(b + shift * np.eye(m)) / (1.0 + k * shift) for b in bs]
    lo = min((s[0] + shift) / (1.0 + k * shift) for s in spectra)
    if not lo >= tol.min_eig_floor:
        raise PreconditionError(
            f"shift {shift} leaves an element with min eigenvalue {lo:.3e}"
        )
    return RegularizedPOVM(m, k, tuple(elements), shift, tuple(bs), completed)


def prepare(bs, margin=DEFAULT_TOL.margin, shift=None, tol=DEFAULT_TOL):
    """Complete then regularize, recording whether completion happened."""
    full = complete_to_identity(bs, tol.completion)
    return regularize(full, margin, shift, completed=len(full) > len(bs), tol=tol)


def build_dilation(p, tol=DEFAULT_TOL):
    metric = GramMetric.block_diagonal(p.elements)
    cond = metric.condition()
    if cond > tol.max_condition:
        raise MetricDegenerateError(f"Gram matrix condition number {cond:.3e} exceeds {tol.max_condition:.1e}")
    projectors = []
    for i in range(p.k):
        P = np.zeros((p.k, p.k))
        P[i, i] = 1.0
        projectors.append(frozen(np.kron(P, np.eye(p.m))))
    omega_bar = frozen(np.ones(p.k))
    p_bar = frozen(np.ones((p.k, p.k)) / p.k)
    return DilationSpace(p.m, p.k, metric, tuple(projectors), omega_bar, p_bar, p)


def embed_vector(phi, d):
    """``φ ↦ φ ⊗ ω̄``: one copy of φ per environment block."""
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (d.m,):
        raise ShapeError(f"vector of shape {phi.shape} does not match base dim {d.m}")
    return np.tile(phi, d.k)


def _extend_linear(M, d):
    S = d.stacking()
    return S @ M @ S.conj().T @ d.W


def extend_state(rho, d):
    """Extend a Hermitian base operator through its spectral decomposition.

    Each term ``λ v v†`` becomes ``λ ṽ ṽ† W``, the rank-one operator built
    from the embedded vector and its W-dual functional.
    """
    rho = as_observable(rho, name="state")
    if rho.shape != (d.m, d.m):
        raise ShapeError(f"operator of shape {rho.shape} does not match base dim {d.m}")
    spectrum = eigen_hermitian(rho)
    out = np.zeros((d.n, d.n), dtype=np.complex128)
    for lam, v in zip(spectrum.values, spectrum.vectors.T):
        if lam == 0.0:
            continue
        vt = embed_vector(v, d)
        out += lam * np.outer(vt, vt.conj() @ d.W)
    return DilatedOperator(out)


def extend_observable_affine(i, d):
    """``Ê_i = (1 + ka) E_i - a I``, the extension of the original B_i."""
    if not 0 <= i < d.k:
        raise IndexError(f"element index {i} out of range for k={d.k}")
    p = d.source
    alpha = -p.shift * np.ones(d.k)
    alpha[i] += p.scale
    return d.element(alpha)


def resolve_coefficients(X, p, tol=DEFAULT_TOL):
    """Minimum-norm real ``c`` with ``X ≈ Σ c_i B̃_i``; returns ``(c, residual)``."""
    X = as_observable(X, tol.hermitian)
    if X.shape != (p.m, p.m):
        raise ShapeError(f"operator of shape {X.shape} does not match base dim {p.m}")
    A = np.stack([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in p.elements], axis=1)
    x = np.concatenate([X.real.ravel(), X.imag.ravel()])
    c = np.linalg.lstsq(A, x, rcond=None)[0]
    residual = float(np.linalg.norm(A @ c - x))
    return c, residual


def resolve_general(X, p, tol=DEFAULT_TOL):
    """Realize ``X`` as ``Σ c_i E_i`` in the span of the commuting projectors."""
    c, residual = resolve_coefficients(X, p, tol)
    limit = tol.span_residual * (1.0 + np.linalg.norm(X))
    if residual > limit:
        raise SpanDeficientError(
            f"observable is not in the span of the family (residual {residual:.3e} > {limit:.1e})",
            residual,
        )
    return DilatedOperator.in_span(c, p.m)


def spans_hermitian(p, tol=DEFAULT_TOL):
    """True iff the regularized elements span all Hermitian operators."""
    A = np.stack([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in p.elements], axis=1)
    return np.linalg.matrix_rank(A, tol=tol.span_residual) == p.m * p.m


def weighted_basis(element):
    """Columns ``u_j / √λ_j``: a basis orthonormal for ``(x, B y)``.

    The sum of their outer products equals ``B⁻¹``.
    """
    spectrum = eigen_hermitian(element)
    if spectrum.values[0] <= 0:
        raise PreconditionError("element must be positive definite")
    return spectrum.vectors / np.sqrt(spectrum.values)


def verify_trace_preservation(As, p, d, tol=DEFAULT_TOL):
    """Compare ``tr[A_j B_i]`` with ``tr[Ã_j E_i]`` in both regularized and original form."""
    As = [as_observable(A, tol.hermitian, name=f"A[{j}]") for j, A in enumerate(As)]
    reg = orig = 0.0
    hats = [extend_observable_affine(i, d).entries for i in range(d.k)]
    for A in As:
        At = extend_state(A, d).entries
        for i in range(d.k):
            reg = max(reg, abs(np.trace(A @ p.elements[i]) - np.trace(At @ d.projectors[i])))
            orig = max(orig, abs(np.trace(A @ p.originals[i]) - np.trace(At @ hats[i])))
    report = Report("trace_preservation")
    report.bound("max_dev_regularized", reg, tol.trace)
    report.bound("max_dev_original", orig, tol.trace)
    return report


def verify_dilation(d, rng=None, n_vectors=50, tol=DEFAULT_TOL):
    """Structural invariants of a dilation: projector algebra, W-self-adjointness, isometry."""
    from .linalg import w_adjoint, w_inner

    rng = np.random.default_rng(0) if rng is None else rng
    report = Report("dilation_invariants")
    report.info("m", d.m)
    report.info("k", d.k)
    report.info("n", d.n)
    report.info("shift", d.source.shift)
    report.info("completed", d.source.completed)
    report.info("metric_condition", d.metric.condition())
    E = d.projectors
    algebra = 0.0
    for i in range(d.k):
        for j in range(d.k):
            target = E[i] if i == j else np.zeros_like(E[i])
            algebra = max(algebra, float(np.max(np.abs(E[i] @ E[j] - target))))
    report.bound("projector_algebra", algebra, 0.0)
    report.bound("projector_sum", float(np.max(np.abs(sum(E) - np.eye(d.n)))), 0.0)
    adj = max(float(np.max(np.abs(w_adjoint(e, d.metric) - e))) for e in E)
    report.bound("w_self_adjoint", adj, 0.0)
    hats = [extend_observable_affine(i, d).entries for i in range(d.k)]
    comm = max(
        (float(np.linalg.norm(a @ b - b @ a)) for a in hats for b in hats), default=0.0
    )
    report.bound("affine_commutators", comm, tol.commutator)
    report.bound("p_bar_trace", abs(np.trace(d.p_bar) - 1.0), 1e-14)
    iso = ext = 0.0
    for _ in range(n_vectors):
        phi = rng.normal(size=d.m) + 1j * rng.normal(size=d.m)
        pt = embed_vector(phi, d)
        iso = max(iso, abs(w_inner(pt, pt, d.metric) - np.vdot(phi, phi)))
        for i in range(d.k):
            ext = max(ext, abs(w_inner(pt, E[i] @ pt, d.metric) - np.vdot(phi, d.source.elements[i] @ phi)))
    report.bound("isometry", iso, tol.isometry)
    report.bound("extension_property", ext, tol.isometry)
    basis = 0.0
    for b in d.source.elements:
        Phi = weighted_basis(b)
        basis = max(basis, float(np.linalg.norm(Phi @ Phi.conj().T - np.linalg.inv(b))))
    report.bound("weighted_basis_inverse", basis, tol.component)
    return report
