"""Decide whether a multilinear identity holds on a bundle.

The linearity invariant of the DSL (each declared variable exactly once per
monomial) makes an identity multilinear in its variables, so it vanishes on
every vector assignment iff it vanishes on every assignment of basis vectors.
check_identity therefore walks all dim^|vars| basis tuples in lexicographic
order and reports the first failure, which is canonical regardless of any
internal evaluation strategy.

Negative map powers are resolved when an identity is bound to a bundle; a
singular map makes the verdict inapplicable rather than pass/fail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .bundle import AlgebraBundle
from .dsl import (
    CycSum,
    Identity,
    MapApply,
    Node,
    OpApply,
    Var,
    expand_identity,
    parse_identity,
)
from .errors import ArityMismatch, ConstraintViolated, NotInvertible, UnknownName
from .linear import LinMap, MultiOp, Vector


@dataclass
class Counterexample:
    basis_tuple: tuple
    residual: tuple  # coordinate texts of the nonzero residual vector
    point: dict | None = None

    def to_dict(self) -> dict:
        out = {"basis_tuple": list(self.basis_tuple), "residual": list(self.residual)}
        if self.point is not None:
            out["point"] = {k: str(v) for k, v in self.point.items()}
        return out


@dataclass
class Verdict:
    identity: str
    status: str  # "pass" | "fail" | "inapplicable"
    reason: str = ""
    counterexample: Counterexample | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        out = {"identity": self.identity, "status": self.status}
        if self.reason:
            out["reason"] = self.reason
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_dict()
        return out


class BoundIdentity:
    """An identity with every name resolved against one bundle: ops looked
    up, map powers turned into matrices, cyclic sums expanded."""

    def __init__(self, ident: Identity, bundle: AlgebraBundle):
        self.ident = ident
        self.bundle = bundle
        self.monomials = expand_identity(ident)
        self._matrices: dict = {}
        self._ops: dict = {}
        for coeff, node in self.monomials:
            self._bind(node)

    def _bind(self, node: Node):
        if isinstance(node, Var):
            if node.name not in self.ident.vars:
                raise UnknownName(node.name, "variable not declared")
            return
        if isinstance(node, MapApply):
            key = (node.map_name, node.power)
            if key not in self._matrices:
                m = self.bundle.maps.get(node.map_name)
                if m is None:
                    raise UnknownName(node.map_name, "no such map in the bundle")
                self._matrices[key] = m.power(node.power)
            self._bind(node.child)
            return
        if isinstance(node, OpApply):
            op = self.bundle.ops.get(node.op_name)
            if op is None:
                raise UnknownName(node.op_name, "no such operation in the bundle")
            if op.arity != len(node.children):
                raise ArityMismatch(
                    f"{node.op_name!r} has arity {op.arity}, called with {len(node.children)}"
                )
            self._ops[node.op_name] = op
            for c in node.children:
                self._bind(c)
            return
        raise TypeError(f"unexpected node {node!r}")

    def eval_monomial(self, node: Node, assignment: Mapping[str, Vector]) -> Vector:
        if isinstance(node, Var):
            return assignment[node.name]
        if isinstance(node, MapApply):
            child = self.eval_monomial(node.child, assignment)
            return self._matrices[(node.map_name, node.power)].apply(child)
        if isinstance(node, OpApply):
            args = [self.eval_monomial(c, assignment) for c in node.children]
            return self._ops[node.op_name].apply(args)
        raise TypeError(f"unexpected node {node!r}")

    def eval_at(self, assignment: Mapping[str, Vector]) -> Vector:
        total = Vector.zero(self.bundle.space, self.bundle.ring.params)
        for coeff, node in self.monomials:
            value = self.eval_monomial(node, assignment)
            total = total + value.scale(coeff)
        return total


def check_identity(
    ident: Identity, bundle: AlgebraBundle, identity_id: str = "identity"
) -> Verdict:
    """Exhaustive basis-tuple check; by linearity this decides the identity
    on all of the space."""
    try:
        bound = BoundIdentity(ident, bundle)
    except NotInvertible as exc:
        return Verdict(identity_id, "inapplicable", f"non-invertible map: {exc}")
    dim = bundle.space.dim
    params = bundle.ring.params
    basis = [Vector.basis(bundle.space, i, params) for i in range(dim)]
    names = bound.ident.vars
    for tup in itertools.product(range(dim), repeat=len(names)):
        assignment = {name: basis[i] for name, i in zip(names, tup)}
        residual = bound.eval_at(assignment)
        if not residual.is_zero():
            return Verdict(
                identity_id,
                "fail",
                counterexample=Counterexample(
                    tup, tuple(c.text() for c in residual.coords)
                ),
            )
    return Verdict(identity_id, "pass")


def check_identity_sampled(
    ident: Identity,
    bundle: AlgebraBundle,
    points: Sequence[Mapping[str, Fraction]],
    identity_id: str = "identity",
) -> Verdict:
    """Check at each parameter point (every point must satisfy the bundle's
    constraints exactly). Reports the first failing (point, tuple)."""
    for point in points:
        point = {k: Fraction(v) for k, v in point.items()}
        bad = bundle.ring.check_point(point)
        if bad is not None:
            raise ConstraintViolated(point, bad.text())
        verdict = check_identity(ident, bundle.eval_at(point), identity_id)
        if verdict.status == "fail":
            verdict.counterexample.point = point
            return verdict
        if verdict.status == "inapplicable":
            return verdict
    return Verdict(identity_id, "pass")


# ---------------------------------------------------------------------------
# exponent-template identity family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentTuple:
    """The eight free integer exponents of the two-parameter identity family."""

    m: int = 0
    n: int = 0
    l: int = 0
    s: int = 0
    p: int = 0
    q: int = 0
    k: int = 0
    t: int = 0

    @classmethod
    def from_seq(cls, seq) -> "ExponentTuple":
        m, n, l, s, p, q, k, t = seq
        return cls(m, n, l, s, p, q, k, t)

    def as_tuple(self):
        return (self.m, self.n, self.l, self.s, self.p, self.q, self.k, self.t)


# the substitution that collapses the second template to its fixed instance
FIXED_EXPONENTS = ExponentTuple(m=-2, n=0, l=-1, s=-1, p=-2, q=0, k=-1, t=-1)


def _ab(p: int, q: int, var: str) -> Node:
    """alpha^p beta^q applied to a variable, with zero powers dropped."""
    node: Node = Var(var)
    if q != 0:
        node = MapApply("b", q, node)
    if p != 0:
        node = MapApply("a", p, node)
    return node


def _power_family_first(e: ExponentTuple) -> Identity:
    m, n, l, s, p, q, k, t = e.as_tuple()
    terms = (
        (
            1,
            OpApply(
                "br",
                (
                    OpApply("mul", (_ab(p, q + 2, "y"), _ab(l + 1, s + 2, "v"))),
                    OpApply("mul", (_ab(m + 2, n, "u"), _ab(k + 1, t + 1, "z"))),
                ),
            ),
        ),
        (
            1,
            OpApply(
                "br",
                (
                    OpApply("mul", (_ab(m + 1, n + 1, "u"), _ab(p + 1, q + 1, "y"))),
                    OpApply("mul", (_ab(k, t + 2, "z"), _ab(l + 2, s + 1, "v"))),
                ),
            ),
        ),
        (
            -2,
            OpApply(
                "mul",
                (
                    OpApply("mul", (_ab(m + 1, n + 1, "u"), _ab(l + 1, s + 2, "v"))),
                    OpApply("br", (_ab(p + 1, q + 1, "y"), _ab(k + 1, t + 1, "z"))),
                ),
            ),
        ),
    )
    return Identity(("y", "v", "u", "z"), terms)


def _power_family_second(e: ExponentTuple) -> Identity:
    m, n, l, s, p, q, k, t = e.as_tuple()
    terms = (
        (
            1,
            OpApply(
                "mul",
                (
                    _ab(p + 2, q + 2, "x"),
                    OpApply(
                        "br",
                        (
                            _ab(l + 1, s + 2, "u"),
                            OpApply("mul", (_ab(m + 2, n, "y"), _ab(k + 2, t, "v"))),
                        ),
                    ),
                ),
            ),
        ),
        (
            1,
            OpApply(
                "mul",
                (
                    _ab(k + 1, t + 3, "v"),
                    OpApply(
                        "br",
                        (
                            OpApply("mul", (_ab(p + 1, q + 1, "x"), _ab(m + 2, n, "y"))),
                            _ab(l + 2, s + 1, "u"),
                        ),
                    ),
                ),
            ),
        ),
        (
            1,
            OpApply(
                "mul",
                (
                    OpApply("mul", (_ab(m + 1, n + 2, "y"), _ab(l + 1, s + 2, "u"))),
                    OpApply("br", (_ab(k + 1, t + 2, "v"), _ab(p + 3, q, "x"))),
                ),
            ),
        ),
    )
    return Identity(("x", "y", "u", "v"), terms)


def instantiate_power_identity(which: str, exps: ExponentTuple | None = None) -> Identity:
    """One of the two exponent-template identities, or the fixed instance.

    which: "eq31" (first template), "eq32" (second template), "eq33" (the
    second template at the fixed exponent substitution; any exps argument is
    ignored for it)."""
    if which == "eq31":
        return _power_family_first(exps or ExponentTuple())
    if which == "eq32":
        return _power_family_second(exps or ExponentTuple())
    if which == "eq33":
        return _power_family_second(FIXED_EXPONENTS)
    raise ValueError(f"unknown template {which!r}")


# spec-level aliases
instantiate_lemma31 = instantiate_power_identity
