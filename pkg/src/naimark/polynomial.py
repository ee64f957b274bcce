"""Polynomial functionals of observables and their lifting to the commuting model.

Expressions are small trees built with ordinary operators::

    X = Leaf("X")
    beta = Param("beta")
    f = X @ X - beta * X + 2 * One()

Scalar nodes standing alone in an operator context mean ``scalar * I``.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .dilation import resolve_general
from .errors import PreconditionError, ShapeError
from .model import compress_G
from .reports import Report


class Expr:
    def __add__(self, other):
        return Add(self, _wrap(other))

    def __radd__(self, other):
        return Add(_wrap(other), self)

    def __sub__(self, other):
        return Add(self, Scale(Const(-1.0), _wrap(other)))

    def __rsub__(self, other):
        return Add(_wrap(other), Scale(Const(-1.0), self))

    def __neg__(self):
        return Scale(Const(-1.0), self)

    def __mul__(self, other):
        other = _wrap(other)
        if isinstance(other, ScalarExpr):
            return Scale(other, self)
        if isinstance(self, ScalarExpr):
            return Scale(self, other)
        raise TypeError("use @ for operator products")

    def __rmul__(self, other):
        return _wrap(other).__mul__(self)

    def __matmul__(self, other):
        return MatMul(self, _wrap(other))

    def __rmatmul__(self, other):
        return MatMul(_wrap(other), self)

    def leaves(self):
        return set()

    def params(self):
        return set()


class ScalarExpr(Expr):
    pass


@dataclass(frozen=True)
class Leaf(Expr):
    """An observable. ``role`` marks e.g. the response ``Y`` in ``f(Y, X, β)``."""

    name: str
    role: str = "data"

    def leaves(self):
        return {self.name}


@dataclass(frozen=True)
class Const(ScalarExpr):
    value: complex


@dataclass(frozen=True)
class Param(ScalarExpr):
    name: str

    def params(self):
        return {self.name}


def One():
    return Const(1.0)


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr

    def leaves(self):
        return self.left.leaves() | self.right.leaves()

    def params(self):
        return self.left.params() | self.right.params()


@dataclass(frozen=True)
class Scale(Expr):
    coef: ScalarExpr
    expr: Expr

    def leaves(self):
        return self.expr.leaves()

    def params(self):
        return self.coef.params() | self.expr.params()


@dataclass(frozen=True)
class MatMul(Expr):
    left: Expr
    right: Expr

    def leaves(self):
        return self.left.leaves() | self.right.leaves()

    def params(self):
        return self.left.params() | self.right.params()


def _wrap(x):
    if isinstance(x, Expr):
        return x
    if np.isscalar(x):
        return Const(x)
    raise TypeError(f"cannot use {type(x).__name__} in an observable polynomial")


def _scalar(node, params):
    if isinstance(node, Const):
        return node.value
    try:
        return params[node.name]
    except KeyError:
        raise PreconditionError(f"unbound parameter {node.name!r}") from None


def evaluate(f, leaves, params=None, dim=None):
    """Evaluate ``f`` with leaf matrices ``leaves[name]`` and scalar ``params``."""
    params = params or {}
    if dim is None:
        dim = next(iter(leaves.values())).shape[0]

    def ev(node):
        if isinstance(node, Leaf):
            try:
                X = np.asarray(leaves[node.name], dtype=np.complex128)
            except KeyError:
                raise PreconditionError(f"unbound observable {node.name!r}") from None
            if X.shape != (dim, dim):
                raise ShapeError(f"leaf {node.name!r} has shape {X.shape}, expected {(dim, dim)}")
            return X
        if isinstance(node, ScalarExpr):
            return _scalar(node, params) * np.eye(dim, dtype=np.complex128)
        if isinstance(node, Add):
            return ev(node.left) + ev(node.right)
        if isinstance(node, Scale):
            return _scalar(node.coef, params) * ev(node.expr)
        if isinstance(node, MatMul):
            return ev(node.left) @ ev(node.right)
        raise TypeError(f"unknown node {node!r}")

    return ev(f)


def evaluate_values(f, values, params=None):
    """Evaluate ``f`` pointwise on classical value vectors (commuting case)."""
    diag = {name: np.diag(np.asarray(v, dtype=np.complex128)) for name, v in values.items()}
    k = len(next(iter(values.values())))
    return np.diagonal(evaluate(f, diag, params, k)).copy()


def lift_functional(f, leaves, p, e, params=None, tol=DEFAULT_TOL):
    """Evaluate ``f`` on the base, lifted and compressed operators.

    Branches: (a) ``f`` on the base observables; (b) ``f`` on the lifted
    operators ``Σ c_i E_i`` of the expanded dilation, then ``compress_G``;
    (c) ``f`` on the individually compressed lifts. PASS requires (b) = (c).
    """
    params = params or {}
    missing = f.params() - set(params)
    if missing:
        raise PreconditionError(f"unbound parameters {sorted(missing)}")
    m = p.m
    coeffs = {name: resolve_general(leaves[name], p, tol).coefficients for name in f.leaves()}
    lifted = {name: e.lift(c).entries for name, c in coeffs.items()}
    compressed = {name: compress_G(U, e) for name, U in lifted.items()}

    base = evaluate(f, leaves, params, m)
    branch_b = compress_G(evaluate(f, lifted, params, e.n), e)
    branch_c = evaluate(f, compressed, params, e.m * e.k)
    classical = evaluate_values(f, coeffs, params)

    report = Report("lift_functional")
    report.bound("dev_b_c_corner", np.linalg.norm(branch_b[:m, :m] - branch_c[:m, :m]), tol.component)
    report.bound("dev_b_c_full", np.linalg.norm(branch_b - branch_c), tol.component)
    report.info("dev_a_b_corner", float(np.linalg.norm(base - branch_b[:m, :m])))
    # the lifted operator is Σ f(c)_i E_i, so (b) is block diagonal in f(c)
    expect_b = np.kron(np.diag(classical), np.eye(m))
    report.bound("dev_b_classical", np.linalg.norm(branch_b - expect_b), tol.component)
    k = e.k
    tensored = {name: np.kron(np.asarray(X, dtype=np.complex128), np.eye(k)) for name, X in leaves.items()}
    lhs = evaluate(f, tensored, params, m * k)
    report.bound("tensor_lift_identity", float(np.max(np.abs(lhs - np.kron(base, np.eye(k))))), tol.product)
    report.data["coefficients"] = {n: [complex(x) for x in c] for n, c in coeffs.items()}
    report.data["branches"] = {"a": base, "b": branch_b, "c": branch_c}
    return report
