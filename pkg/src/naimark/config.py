"""Centralized numerical tolerances.

Every check in the package reads its threshold from a :class:`Tolerances`
record so that one override (e.g. the CLI's ``--tol``) reaches all of them.
"""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # input validation
    hermitian: float = 1e-9
    identity_sum: float = 1e-12
    completion: float = 1e-12
    povm: float = 1e-9
    state: float = 1e-10
    # regularization / metric conditioning
    margin: float = 0.5
    min_eig_floor: float = 1e-8
    max_condition: float = 1e12
    # verification thresholds
    trace: float = 1e-10
    isometry: float = 1e-12
    commutator: float = 1e-12
    component: float = 1e-10
    product: float = 1e-12
    span_residual: float = 1e-10
    probability: float = 1e-12
    born: float = 1e-10
    merge_commutator: float = 1e-10
    merge_born: float = 1e-8
    # estimation
    probability_floor: float = 1e-12
    monotone_slack: float = 1e-12

    _CHECKS = (
        "trace", "isometry", "commutator", "component", "product",
        "born", "merge_commutator", "merge_born",
    )

    def with_check_tol(self, tol):
        """Return a copy with every verification threshold set to ``tol``."""
        return replace(self, **{name: float(tol) for name in self._CHECKS})

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOL = Tolerances()
