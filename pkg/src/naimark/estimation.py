"""State estimation from outcome counts of the regularized family.

Two estimators: linear inversion (minimum-norm least squares over unit-trace
Hermitian matrices, then eigenvalue clipping) and the iterative maximum
likelihood fixed point ``ρ ← N[R ρ R]``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .errors import PreconditionError, SpanDeficientError
from .linalg import eigen_hermitian
from .bridge import QuantumState

METHODS = ("linear_inversion", "em")


@dataclass(frozen=True, eq=False)
class EstimationProblem:
    povm: object
    counts: np.ndarray
    method: str = "em"
    max_iters: int = 5000
    tol: float = 1e-10

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.shape != (self.povm.k,):
            raise PreconditionError(f"expected {self.povm.k} counts, got shape {counts.shape}")
        if np.any(counts < 0) or counts.sum() < 1:
            raise PreconditionError("counts must be non-negative with a positive total")
        if self.method not in METHODS:
            raise PreconditionError(f"unknown method {self.method!r}; choose from {METHODS}")
        object.__setattr__(self, "counts", counts)

    @property
    def frequencies(self):
        return self.counts / self.counts.sum()


@dataclass
class EstimationResult:
    state: QuantumState
    diagnostics: dict = field(default_factory=dict)

    @property
    def rho(self):
        return self.state.rho


def traceless_basis(m):
    """Orthonormal (Hilbert–Schmidt) basis of traceless Hermitian m×m matrices."""
    basis = []
    for a in range(m):
        for b in range(a + 1, m):
            S = np.zeros((m, m), dtype=np.complex128)
            S[a, b] = S[b, a] = 1 / np.sqrt(2)
            A = np.zeros((m, m), dtype=np.complex128)
            A[a, b], A[b, a] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            basis += [S, A]
    for l in range(1, m):
        D = np.zeros((m, m), dtype=np.complex128)
        D[:l, :l] = np.eye(l)
        D[l, l] = -l
        basis.append(D / np.sqrt(l * (l + 1)))
    return basis


def project_to_states(H):
    """Clip negative eigenvalues and renormalize the trace."""
    spectrum = eigen_hermitian((H + H.conj().T) / 2)
    w = np.clip(spectrum.values, 0.0, None)
    if w.sum() <= 0:
        m = H.shape[0]
        return np.eye(m, dtype=np.complex128) / m
    rho = (spectrum.vectors * (w / w.sum())) @ spectrum.vectors.conj().T
    return (rho + rho.conj().T) / 2


def linear_inversion(elements, freqs, require_span=False):
    m = elements[0].shape[0]
    gammas = traceless_basis(m)
    M = np.array([[np.trace(b @ g).real for g in gammas] for b in elements]).reshape(len(elements), -1)
    rhs = np.asarray(freqs, dtype=float) - np.array([np.trace(b).real for b in elements]) / m
    rank = np.linalg.matrix_rank(M) if M.size else 0
    spanning = rank == m * m - 1
    if require_span and not spanning:
        raise SpanDeficientError(
            f"family does not determine the state (rank {rank} < {m * m - 1})", float("nan")
        )
    x = np.linalg.lstsq(M, rhs, rcond=None)[0] if M.size else np.zeros(0)
    raw = np.eye(m, dtype=np.complex128) / m + sum((c * g for c, g in zip(x, gammas)), np.zeros((m, m)))
    raw = (raw + raw.conj().T) / 2
    residual = float(np.linalg.norm(M @ x - rhs)) if M.size else float(np.linalg.norm(rhs))
    return raw, {"spanning": bool(spanning), "residual": residual,
                 "raw_min_eigenvalue": float(eigen_hermitian(raw).values[0])}


def _probs(elements, rho):
    return np.array([np.trace(rho @ b).real for b in elements])


def _loglik(freqs, p):
    mask = freqs > 0
    return math.fsum(freqs[mask] * np.log(p[mask]))


def _normalize(X):
    X = (X + X.conj().T) / 2
    return X / np.trace(X).real


def em(elements, freqs, max_iters=5000, tol=1e-10, floor=DEFAULT_TOL.probability_floor):
    """Iterative ML fixed point ``ρ ← N[R(ρ) ρ R(ρ)]``, ``R = Σ (f_i / p_i) B̃_i``.

    A step that would lower the log-likelihood is replaced by the diluted
    update ``N[(I + εR) ρ (I + εR)]`` with halving ``ε``; this keeps the
    likelihood trace non-decreasing.
    """
    m = elements[0].shape[0]
    freqs = np.asarray(freqs, dtype=float)
    rho = np.eye(m, dtype=np.complex128) / m
    eye = np.eye(m)
    floored = False

    def state_probs(r):
        nonlocal floored
        p = _probs(elements, r)
        low = (p < floor) & (freqs > 0)
        if np.any(low):
            floored = True
            p = np.where(low, floor, p)
        return p

    p = state_probs(rho)
    trace = [_loglik(freqs, p)]
    diluted = 0
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        R = sum(f / q * b for f, q, b in zip(freqs, p, elements) if f > 0)
        cand = _normalize(R @ rho @ R)
        p_new = state_probs(cand)
        L_new = _loglik(freqs, p_new)
        if L_new < trace[-1]:
            eps = 1.0
            while eps > 1e-12:
                step = eye + eps * R
                cand = _normalize(step @ rho @ step)
                p_new = state_probs(cand)
                L_new = _loglik(freqs, p_new)
                if L_new >= trace[-1]:
                    break
                eps /= 2
            else:
                converged = True
                break
            diluted += 1
        delta = np.linalg.norm(cand - rho)
        rho, p = cand, p_new
        trace.append(L_new)
        if delta <= tol:
            converged = True
            break
    return rho, {
        "iterations": it,
        "converged": converged,
        "loglik": trace,
        "diluted_steps": diluted,
        "floored": floored,
    }


def estimate_state(ep, require_span=False):
    elements = ep.povm.elements
    freqs = ep.frequencies
    if ep.method == "linear_inversion":
        raw, diag = linear_inversion(elements, freqs, require_span)
        rho = project_to_states(raw)
    else:
        rho, diag = em(elements, freqs, ep.max_iters, ep.tol)
        diag["monotone"] = bool(
            all(b >= a - DEFAULT_TOL.monotone_slack for a, b in zip(diag["loglik"], diag["loglik"][1:]))
        )
    diag["method"] = ep.method
    diag["n"] = int(ep.counts.sum())
    return EstimationResult(QuantumState(rho), diag)
