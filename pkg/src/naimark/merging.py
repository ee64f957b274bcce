"""Two ways of combining POVMs P and Q into one commuting description."""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .dilation import _extend_linear, build_dilation, extend_observable_affine, extend_state, prepare
from .errors import POVMValidationError
from .povms import random_state, validate_povm
from .reports import Report


def merge_halfsum(P, Q, tol=DEFAULT_TOL):
    """``{½P_i} ∪ {½Q_j}``: a single POVM containing both, up to the factor ½."""
    for label, fam in (("P", P), ("Q", Q)):
        try:
            validate_povm(fam, tol.povm)
        except POVMValidationError as exc:
            raise POVMValidationError(f"{label}: {exc}", exc.offending) from None
    if np.shape(P[0]) != np.shape(Q[0]):
        raise POVMValidationError("P and Q act on different dimensions")
    return [0.5 * np.asarray(x, dtype=np.complex128) for x in list(P) + list(Q)]


def halfsum_probabilities(merged, rho):
    """Raw Born values of the merged family and the same values doubled."""
    raw = np.array([np.trace(rho @ x).real for x in merged])
    return {"raw": raw, "rescaled": 2.0 * raw}


@dataclass(frozen=True, eq=False)
class DoubleDilation:
    """Result of dilating P, then dilating the extended Q on the larger space."""

    stage1: object
    stage2: object
    p_family: tuple
    q_family: tuple
    report: Report

    @property
    def dim(self):
        return self.stage2.n


def merge_double_dilation(P, Q, states=None, margin=DEFAULT_TOL.margin, tol=DEFAULT_TOL, seed=0):
    """Dilate P; extend Q by ``I ⊗ Q_j``; dilate that family again.

    The P extensions are carried to the final space as ``I ⊗ Ê_i``. Born
    statistics are checked stage by stage on ``states`` (default: the
    maximally mixed state, ``|0⟩⟨0|`` and one seeded random state).
    """
    validate_povm(P, tol.povm)
    validate_povm(Q, tol.povm)
    P = [np.asarray(x, dtype=np.complex128) for x in P]
    Q = [np.asarray(x, dtype=np.complex128) for x in Q]
    m = P[0].shape[0]
    if Q[0].shape != (m, m):
        raise POVMValidationError("P and Q act on different dimensions")
    if states is None:
        zero = np.zeros((m, m), dtype=np.complex128)
        zero[0, 0] = 1
        states = [np.eye(m) / m, zero, random_state(np.random.default_rng(seed), m)]

    p1 = prepare(P, margin, tol=tol)
    d1 = build_dilation(p1, tol)
    kP = d1.k
    p_hat1 = [extend_observable_affine(i, d1).entries for i in range(kP)]
    q_ext1 = [np.kron(np.eye(kP), q) for q in Q]

    p2 = prepare(q_ext1, margin, tol=tol)
    d2 = build_dilation(p2, tol)
    kQ = d2.k
    q_family = [extend_observable_affine(j, d2).entries for j in range(kQ)]
    p_family = [np.kron(np.eye(kQ), e) for e in p_hat1]

    report = Report("merge_double_dilation")
    report.info("m", m)
    report.info("stage1_dim", d1.n)
    report.info("final_dim", d2.n)
    report.info("shift_P", p1.shift)
    report.info("shift_Q", p2.shift)
    family = p_family + q_family
    comm = max(
        (float(np.linalg.norm(a @ b - b @ a)) for a in family for b in family), default=0.0
    )
    report.bound("max_commutator", comm, tol.merge_commutator)
    proj = [np.kron(np.eye(kQ), e) for e in d1.projectors] + list(d2.projectors)
    pcomm = max(float(np.linalg.norm(a @ b - b @ a)) for a in proj for b in proj)
    report.bound("max_commutator_projectors", pcomm, tol.merge_commutator)
    report.bound("joint_sum_minus_2I", np.linalg.norm(sum(family) - 2 * np.eye(d2.n)), tol.merge_commutator)

    s1p = s1q = s2p = s2q = 0.0
    for rho in states:
        born_p = np.array([np.trace(rho @ x) for x in P])
        born_q = np.array([np.trace(rho @ x) for x in Q])
        r1 = extend_state(rho, d1).entries
        probs1 = np.array([np.trace(r1 @ e) for e in d1.projectors])
        s1p = max(s1p, np.max(np.abs(p1.scale * probs1 - p1.shift - born_p)))
        s1q = max(s1q, np.max(np.abs([np.trace(r1 @ q) for q in q_ext1] - born_q)))
        # the stage-1 state is not Euclidean-Hermitian; extend it linearly
        r2 = _extend_linear(r1, d2)
        probs2 = np.array([np.trace(r2 @ e) for e in d2.projectors])
        s2q = max(s2q, np.max(np.abs(p2.scale * probs2 - p2.shift - born_q)))
        s2p = max(s2p, np.max(np.abs([np.trace(r2 @ x) for x in p_family] - born_p)))
    report.bound("born_stage1_P", s1p, tol.merge_born)
    report.bound("born_stage1_Q", s1q, tol.merge_born)
    report.bound("born_stage2_P", s2p, tol.merge_born)
    report.bound("born_stage2_Q", s2q, tol.merge_born)
    return DoubleDilation(d1, d2, tuple(p_family), tuple(q_family), report)
