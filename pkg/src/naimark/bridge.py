"""The commuting projector family viewed as a classical probability model.

The sample space is the outcome index set of {E_i}; an element
``U = Σ α_i E_i`` of the Naimark space is the random variable ``i ↦ α_i``.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .config import DEFAULT_TOL
from .dilation import DilatedOperator, resolve_general
from .errors import NaimarkError, PreconditionError, ShapeError
from .linalg import as_observable, eigen_hermitian, frozen
from .model import conditional_observables
from .reports import Report


@dataclass(frozen=True, eq=False)
class QuantumState:
    rho: np.ndarray

    def __post_init__(self):
        rho = as_observable(self.rho, name="state")
        lo = float(eigen_hermitian(rho).values[0])
        tr = np.trace(rho).real
        if lo < -DEFAULT_TOL.state or abs(tr - 1) > DEFAULT_TOL.state:
            raise PreconditionError(
                f"not a density matrix (min eigenvalue {lo:.3e}, trace {tr:.12g})"
            )
        object.__setattr__(self, "rho", frozen(rho))

    @property
    def dim(self):
        return self.rho.shape[0]


@dataclass(frozen=True, eq=False)
class JointDistribution:
    k: int
    probs: np.ndarray
    variables: dict = field(default_factory=dict)
    state: QuantumState = None
    source: object = None

    def with_variable(self, name, U):
        values = random_variable_of(U)
        if values.shape != (self.k,):
            raise ShapeError(f"variable has {values.size} values, expected {self.k}")
        return replace(self, variables={**self.variables, name: frozen(values)})

    def expectation(self, values):
        if isinstance(values, str):
            values = self.variables[values]
        return complex(np.dot(self.probs, values))


def joint_distribution(s, d, tol=DEFAULT_TOL):
    """Outcome law ``p_i = tr[ρ B̃_i]`` of the projective family on a state."""
    if not isinstance(s, QuantumState):
        s = QuantumState(s)
    if s.dim != d.m:
        raise ShapeError(f"state dim {s.dim} does not match base dim {d.m}")
    p = np.array([np.trace(s.rho @ b).real for b in d.source.elements])
    if np.any(p < -tol.probability):
        raise PreconditionError(f"negative outcome probability {p.min():.3e}: broken dilation")
    if np.any(p < 0):
        p = np.clip(p, 0.0, None)
    p = p / math.fsum(p)
    return JointDistribution(d.k, frozen(p), {}, s, d.source)


def unregularize_probabilities(jd, p):
    """``q_i = (1 + ka) p_i - a``: Born values of the pre-regularization family."""
    if jd.source is not None and jd.source is not p:
        raise PreconditionError("joint distribution was not built from this regularized family")
    if jd.k != p.k:
        raise ShapeError(f"distribution has {jd.k} outcomes, family has {p.k}")
    return p.scale * np.asarray(jd.probs) - p.shift


def _cdf(probs):
    # compensated partial sums
    cdf = np.array([math.fsum(probs[: i + 1]) for i in range(len(probs))])
    cdf[-1] = 1.0
    return cdf


def sample_outcomes(jd, n, seed):
    """Multinomial counts of size ``n`` by inverse-CDF categorical draws.

    Uniforms come from a Philox 4x64 counter-based generator keyed by
    ``seed``, so counts are a pure function of ``(probs, n, seed)``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    probs = np.asarray(jd.probs, dtype=float)
    if np.any(probs < -DEFAULT_TOL.probability):
        raise PreconditionError("distribution has negative probabilities")
    probs = np.clip(probs, 0.0, None)
    probs = probs / math.fsum(probs)
    gen = np.random.Generator(np.random.Philox(int(seed)))
    u = gen.random(n)
    idx = np.searchsorted(_cdf(probs), u, side="right")
    return np.bincount(idx, minlength=len(probs)).astype(np.int64)


def random_variable_of(U):
    """Value vector ``v(i) = α_i`` of an element ``U = Σ α_i E_i``."""
    if not isinstance(U, DilatedOperator) or not U.in_naimark_space:
        raise PreconditionError("operator is not in the Naimark space")
    return np.array(U.coefficients)


def verify_correlation_structure(A, B, s, p, tol=DEFAULT_TOL):
    """Classical joint law of the resolved ``(A, B)`` against Born statistics.

    Marginal expectations are certified; product moments and Lüders
    conditionals are reported as candidates without a verdict.
    """
    if not isinstance(s, QuantumState):
        s = QuantumState(s)
    rho = s.rho
    A = as_observable(A, name="A")
    B = as_observable(B, name="B")
    vA = random_variable_of(resolve_general(A, p, tol)).real
    vB = random_variable_of(resolve_general(B, p, tol)).real
    probs = np.array([np.trace(rho @ b).real for b in p.elements])
    report = Report("correlation_structure")
    eA, eB = float(probs @ vA), float(probs @ vB)
    qA, qB = np.trace(rho @ A).real, np.trace(rho @ B).real
    report.info("E_vA", eA)
    report.info("E_vB", eB)
    report.bound("marginal_A", abs(eA - qA), tol.born)
    report.bound("marginal_B", abs(eB - qB), tol.born)
    eAB = float(probs @ (vA * vB))
    report.info("E_vA_vB", eAB)
    report.info("tr_rho_sym_AB", np.trace(rho @ (A @ B + B @ A) / 2).real)
    report.info("tr_rho_AB", complex(np.trace(rho @ A @ B)))
    # joint law of (vA, vB): outcome i carries the pair (vA_i, vB_i)
    report.data["joint_support"] = [[float(a), float(b), float(w)] for a, b, w in zip(vA, vB, probs)]
    try:
        _, _, pr_ab, pr_ba = conditional_observables(A, B, rho, tol)
        report.info("luders_pr_A_given_B", pr_ab)
        report.info("luders_pr_B_given_A", pr_ba)
    except NaimarkError as exc:  # reported, not fatal
        report.info("luders_conditionals", f"undefined: {exc}")
    if abs(eB) > 1e-12:
        report.info("classical_E_vAvB_over_E_vB", eAB / eB)
    if abs(eA) > 1e-12:
        report.info("classical_E_vAvB_over_E_vA", eAB / eA)
    return report


def marginal_agreement(jd, coefficients, p):
    """``|Σ p_i α_i - tr[ρ Σ α_i B̃_i]|`` for a value vector ``α``."""
    alpha = np.asarray(coefficients)
    X = sum(a * b for a, b in zip(alpha, p.elements))
    return abs(jd.expectation(alpha) - np.trace(jd.state.rho @ X))

