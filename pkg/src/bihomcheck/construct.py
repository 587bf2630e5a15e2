"""Algebra-to-algebra constructions as bundle transformers.

Every construction validates its hypotheses first (strict by default; pass
require=False to downgrade refusals to recorded warnings), never mutates its
input, and stamps the output's provenance with the construction name and the
inputs used.

Derivations and involutions are required to commute with both structure maps
even where a weaker hypothesis might do: without commutation the constructed
ternary bracket need not be multiplicative under the structure maps. The
require flag lets experiments relax this.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .bundle import AlgebraBundle, Ring
from .dsl import Identity, MapApply, OpApply, Var
from .engine import check_identity
from .errors import NotInvertible, PredicateFailed, RingMismatch
from .linear import (
    BasisSpace,
    LinMap,
    MultiOp,
    Vector,
    check_commute,
    tensor_map,
    tensor_space,
    twist_op,
)
from .scalars import Scalar
from .structures import check_structure, derivation_identity, multiplicativity_identity


@dataclass(frozen=True)
class TwistSpec:
    """Which map (with which integer power) to apply in each argument slot of
    one operation."""

    op_name: str
    slots: tuple  # of (map name, power)


def _classical_identity(kind: str) -> Identity:
    if kind == "comm":
        return Identity(
            ("x", "y"),
            ((1, OpApply("mul", (Var("x"), Var("y")))), (-1, OpApply("mul", (Var("y"), Var("x"))))),
        )
    if kind == "assoc":
        lhs = OpApply("mul", (OpApply("mul", (Var("x"), Var("y"))), Var("z")))
        rhs = OpApply("mul", (Var("x"), OpApply("mul", (Var("y"), Var("z")))))
        return Identity(("x", "y", "z"), ((1, lhs), (-1, rhs)))
    raise ValueError(kind)


class _Hypotheses:
    """Collects hypothesis failures; raises in strict mode, records otherwise."""

    def __init__(self, construction: str, require: bool):
        self.construction = construction
        self.require = require
        self.warnings: list = []

    def demand(self, ok: bool, what: str):
        if ok:
            return
        if self.require:
            raise PredicateFailed(f"{self.construction}: {what}")
        self.warnings.append(what)

    def check_identity(self, ident: Identity, bundle: AlgebraBundle, what: str):
        self.demand(check_identity(ident, bundle, what).passed, what)

    def check_commute(self, bundle: AlgebraBundle, m1: str, m2: str):
        res = check_commute(bundle.require_map(m1), bundle.require_map(m2))
        self.demand(res.ok, f"maps {m1!r} and {m2!r} do not commute")

    def provenance(self, **fields) -> dict:
        prov = {"construction": self.construction, **fields}
        if self.warnings:
            prov["warnings"] = list(self.warnings)
        return prov


# ---------------------------------------------------------------------------
# twisting
# ---------------------------------------------------------------------------


def yau_twist(bundle: AlgebraBundle, specs, require: bool = True) -> AlgebraBundle:
    """Replace each named op by op∘(maps applied slotwise); the maps must
    commute pairwise and be multiplicative for every op they twist."""
    if isinstance(specs, TwistSpec):
        specs = [specs]
    hyp = _Hypotheses("yau-twist", require)
    used = []
    for spec in specs:
        for name, _power in spec.slots:
            if name not in used:
                used.append(name)
    for m1, m2 in itertools.combinations(used, 2):
        hyp.check_commute(bundle, m1, m2)
    for spec in specs:
        op = bundle.require_op(spec.op_name)
        for name, _power in spec.slots:
            hyp.check_identity(
                multiplicativity_identity(name, spec.op_name, op.arity),
                bundle,
                f"map {name!r} is not multiplicative for op {spec.op_name!r}",
            )
    ops = dict(bundle.ops)
    for spec in specs:
        op = bundle.require_op(spec.op_name)
        maps = [bundle.require_map(name).power(power) for name, power in spec.slots]
        ops[spec.op_name] = twist_op(op, maps)
    prov = hyp.provenance(
        input=bundle.label(),
        twists={s.op_name: [f"{n}^{p}" for n, p in s.slots] for s in specs},
    )
    return bundle.replace(ops=ops, provenance=prov)


# ---------------------------------------------------------------------------
# brackets and pre-Lie products from a derivation
# ---------------------------------------------------------------------------


def _commassoc_hypotheses(hyp, bundle, d_name, a_name, b_name):
    mul0 = bundle.require_op("mul", 2)
    hyp.check_identity(_classical_identity("comm"), bundle, "product is not commutative")
    hyp.check_identity(_classical_identity("assoc"), bundle, "product is not associative")
    for name in (a_name, b_name):
        hyp.check_identity(
            multiplicativity_identity(name, "mul", 2),
            bundle,
            f"map {name!r} is not an algebra map for the product",
        )
    hyp.check_identity(
        derivation_identity(d_name, "mul", 2),
        bundle,
        f"map {d_name!r} is not a derivation of the product",
    )
    for m1, m2 in itertools.combinations({a_name, b_name, d_name}, 2):
        hyp.check_commute(bundle, m1, m2)
    return mul0


def derivation_tbp(
    bundle: AlgebraBundle,
    d_name: str = "D",
    a_name: str = "a",
    b_name: str = "b",
    require: bool = True,
) -> AlgebraBundle:
    """From a commutative associative product with a derivation: the twisted
    product x.y = mul0(a(x), b(y)) and the Wronskian-style bracket
    br(x, y) = mul0(a(x), D(b(y))) - mul0(b(y), D(a(x)))."""
    hyp = _Hypotheses("derivation-tbp", require)
    mul0 = _commassoc_hypotheses(hyp, bundle, d_name, a_name, b_name)
    A = bundle.map_or_identity(a_name)
    B = bundle.map_or_identity(b_name)
    D = bundle.require_map(d_name)
    DA, DB = D.compose(A), D.compose(B)
    dim = bundle.space.dim
    mul = twist_op(mul0, [A, B])
    constants = {}
    for i in range(dim):
        for j in range(dim):
            value = mul0.apply([A.column(i), DB.column(j)]) - mul0.apply(
                [B.column(j), DA.column(i)]
            )
            if not value.is_zero():
                constants[(i, j)] = value.coords
    br = MultiOp(bundle.space, bundle.ring.params, 2, constants)
    ops = dict(bundle.ops)
    ops["mul"] = mul
    ops["br"] = br
    maps = dict(bundle.maps)
    maps["a"], maps["b"] = A, B
    prov = hyp.provenance(input=bundle.label(), derivation=d_name, maps=[a_name, b_name])
    return AlgebraBundle(bundle.space, bundle.ring, ops, maps, prov)


def pre_lie_from_derivation(
    bundle: AlgebraBundle,
    d_name: str = "D",
    a_name: str = "a",
    b_name: str = "b",
    require: bool = True,
) -> AlgebraBundle:
    """Same data as derivation_tbp but producing the one-sided product
    star(x, y) = mul0(a(x), D(b(y)))."""
    hyp = _Hypotheses("pre-lie", require)
    mul0 = _commassoc_hypotheses(hyp, bundle, d_name, a_name, b_name)
    A = bundle.map_or_identity(a_name)
    B = bundle.map_or_identity(b_name)
    D = bundle.require_map(d_name)
    DB = D.compose(B)
    dim = bundle.space.dim
    constants = {}
    for i in range(dim):
        for j in range(dim):
            value = mul0.apply([A.column(i), DB.column(j)])
            if not value.is_zero():
                constants[(i, j)] = value.coords
    ops = dict(bundle.ops)
    ops["mul"] = twist_op(mul0, [A, B])
    ops["star"] = MultiOp(bundle.space, bundle.ring.params, 2, constants)
    maps = dict(bundle.maps)
    maps["a"], maps["b"] = A, B
    prov = hyp.provenance(input=bundle.label(), derivation=d_name, maps=[a_name, b_name])
    return AlgebraBundle(bundle.space, bundle.ring, ops, maps, prov)


def np_commutator(bundle: AlgebraBundle, require: bool = True) -> AlgebraBundle:
    """Twisted commutator bracket of the star product:
    br(x, y) = star(x, y) - star(a^-1 b(y), a b^-1(x))."""
    hyp = _Hypotheses("np-commutator", require)
    star = bundle.require_op("star", 2)
    A, B = bundle.require_map("a"), bundle.require_map("b")
    left = A.inverse().compose(B)   # raises NotInvertible on singular maps
    right = A.compose(B.inverse())
    report = check_structure("pre-lie-poisson", bundle)
    hyp.demand(
        report.passed,
        "input does not satisfy the pre-Lie Poisson laws: "
        + ", ".join(v.identity for v in report.verdicts if v.status != "pass"),
    )
    dim = bundle.space.dim
    params = bundle.ring.params
    constants = {}
    for i in range(dim):
        for j in range(dim):
            ei = Vector.basis(bundle.space, i, params)
            ej = Vector.basis(bundle.space, j, params)
            value = star.apply([ei, ej]) - star.apply([left.column(j), right.column(i)])
            if not value.is_zero():
                constants[(i, j)] = value.coords
    ops = dict(bundle.ops)
    ops["br"] = MultiOp(bundle.space, params, 2, constants)
    prov = hyp.provenance(input=bundle.label())
    return bundle.replace(ops=ops, provenance=prov)


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------


def _tensor_vector(space: BasisSpace, params, va: Vector, vb: Vector) -> Vector:
    coords = []
    for ca in va.coords:
        for cb in vb.coords:
            coords.append(ca * cb)
    return Vector(space, params, coords)


def tensor_bundle(
    a_bundle: AlgebraBundle, b_bundle: AlgebraBundle, kind: str, require: bool = True
) -> AlgebraBundle:
    """Tensor product of two bundles. kind "bp-tbp" combines products and
    brackets (bracket = br⊗mul + mul⊗br); kind "pre-lie-poisson" combines
    products and star products the same way."""
    if a_bundle.ring != b_bundle.ring:
        raise RingMismatch("tensor factors must share one coefficient ring")
    if kind not in ("bp-tbp", "pre-lie-poisson"):
        raise ValueError(f"unknown tensor kind {kind!r}")
    second = "br" if kind == "bp-tbp" else "star"
    hyp = _Hypotheses(f"tensor({kind})", require)
    for bundle in (a_bundle, b_bundle):
        bundle.require_op("mul", 2)
        bundle.require_op(second, 2)
    if kind == "bp-tbp":
        for bundle, side in ((a_bundle, "left"), (b_bundle, "right")):
            for name in ("a", "b"):
                if bundle.require_map(name).det().is_zero():
                    hyp.warnings.append(
                        f"{side} factor map {name!r} is singular; the transposed-structure "
                        "preservation claim assumes invertible maps"
                    )
    space = tensor_space(a_bundle.space, b_bundle.space)
    params = a_bundle.ring.params
    maps = {
        "a": tensor_map(a_bundle.require_map("a"), b_bundle.require_map("a")),
        "b": tensor_map(a_bundle.require_map("b"), b_bundle.require_map("b")),
    }
    da, db = a_bundle.space.dim, b_bundle.space.dim

    def basis_pair(i):
        return divmod(i, db)

    mul_a, mul_b = a_bundle.ops["mul"], b_bundle.ops["mul"]
    sec_a, sec_b = a_bundle.ops[second], b_bundle.ops[second]
    mul_constants = {}
    sec_constants = {}
    for i in range(da * db):
        i1, i2 = basis_pair(i)
        for j in range(da * db):
            j1, j2 = basis_pair(j)
            ma = mul_a.value_at((i1, j1))
            mb = mul_b.value_at((i2, j2))
            sa = sec_a.value_at((i1, j1))
            sb = sec_b.value_at((i2, j2))
            prod = _tensor_vector(space, params, ma, mb)
            if not prod.is_zero():
                mul_constants[(i, j)] = prod.coords
            mixed = _tensor_vector(space, params, sa, mb) + _tensor_vector(
                space, params, ma, sb
            )
            if not mixed.is_zero():
                sec_constants[(i, j)] = mixed.coords
    ops = {
        "mul": MultiOp(space, params, 2, mul_constants),
        second: MultiOp(space, params, 2, sec_constants),
    }
    prov = hyp.provenance(inputs=[a_bundle.label(), b_bundle.label()], kind=kind)
    return AlgebraBundle(space, a_bundle.ring, ops, maps, prov)


# ---------------------------------------------------------------------------
# ternary brackets
# ---------------------------------------------------------------------------


def _ternary_from_slotmaps(bundle, first: LinMap, second: LinMap, third: LinMap):
    """Shared constants builder for the three ternary constructions, all of
    shape  g1(x).br(b^-1 y, b^-1 z) + g2(y).br(a^-1 z, a b^-2 x)
         + g3(z).br(b^-1 x, a b^-2 y)   with g1, g2, g3 supplied."""
    mul = bundle.require_op("mul", 2)
    br = bundle.require_op("br", 2)
    A, B = bundle.require_map("a"), bundle.require_map("b")
    a_inv, b_inv = A.inverse(), B.inverse()
    ab2 = A.compose(b_inv).compose(b_inv)
    dim = bundle.space.dim
    constants = {}
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                value = mul.apply(
                    [first.column(i), br.apply([b_inv.column(j), b_inv.column(k)])]
                )
                value = value + mul.apply(
                    [second.column(j), br.apply([a_inv.column(k), ab2.column(i)])]
                )
                value = value + mul.apply(
                    [third.column(k), br.apply([b_inv.column(i), ab2.column(j)])]
                )
                if not value.is_zero():
                    constants[(i, j, k)] = value.coords
    return MultiOp(bundle.space, bundle.ring.params, 3, constants)


def ternary_from_derivation(
    bundle: AlgebraBundle, d_name: str = "D", require: bool = True
) -> AlgebraBundle:
    """Ternary bracket built from a derivation of both operations."""
    hyp = _Hypotheses("ternary-derivation", require)
    A, B = bundle.require_map("a"), bundle.require_map("b")
    D = bundle.require_map(d_name)
    for opname in ("mul", "br"):
        hyp.check_identity(
            derivation_identity(d_name, opname, 2),
            bundle,
            f"map {d_name!r} is not a derivation of {opname!r}",
        )
    hyp.check_commute(bundle, d_name, "a")
    hyp.check_commute(bundle, d_name, "b")
    third = D.compose(A.inverse()).compose(B)
    tbr = _ternary_from_slotmaps(bundle, D, D, third)
    ops = dict(bundle.ops)
    ops["tbr"] = tbr
    prov = hyp.provenance(input=bundle.label(), derivation=d_name)
    return bundle.replace(ops=ops, provenance=prov)


def ternary_from_involution(
    bundle: AlgebraBundle, f_name: str = "f", require: bool = True
) -> AlgebraBundle:
    """Ternary bracket built from an involutive bracket anti-morphism. The
    transposed ternary compatibility is not implied here: the exact condition
    is checked and recorded in provenance, never assumed."""
    from .structures import IDENTITIES, check_involution

    hyp = _Hypotheses("ternary-involution", require)
    A, B = bundle.require_map("a"), bundle.require_map("b")
    F = bundle.require_map(f_name)
    inv_report = check_involution(bundle, f_name)
    hyp.demand(
        inv_report.passed,
        "involution hypotheses fail: "
        + ", ".join(v.identity for v in inv_report.verdicts if v.status != "pass"),
    )
    third = F.compose(A.inverse()).compose(B)
    tbr = _ternary_from_slotmaps(bundle, F, F, third)
    ops = dict(bundle.ops)
    ops["tbr"] = tbr
    compat_bundle = bundle.replace(ops=ops)
    if f_name != "f":
        maps = dict(compat_bundle.maps)
        maps["f"] = F
        compat_bundle = compat_bundle.replace(maps=maps)
    compat = check_identity(IDENTITIES["invol-compat"], compat_bundle, "invol-compat")
    prov = hyp.provenance(
        input=bundle.label(), involution=f_name, invol_compat=compat.status
    )
    return bundle.replace(ops=ops, provenance=prov)


def ternary_from_product(bundle: AlgebraBundle, require: bool = True) -> AlgebraBundle:
    """Ternary bracket built from the product itself; the intended inputs are
    strong BP bundles (pass require=False to experiment beyond them)."""
    hyp = _Hypotheses("ternary-product", require)
    report = check_structure("strong-bp", bundle)
    hyp.demand(
        report.passed,
        "input does not satisfy the strong BP laws: "
        + ", ".join(v.identity for v in report.verdicts if v.status != "pass"),
    )
    ident = LinMap.identity(bundle.space, bundle.ring.params)
    A, B = bundle.require_map("a"), bundle.require_map("b")
    third = A.inverse().compose(B)
    tbr = _ternary_from_slotmaps(bundle, ident, ident, third)
    ops = dict(bundle.ops)
    ops["tbr"] = tbr
    prov = hyp.provenance(input=bundle.label())
    return bundle.replace(ops=ops, provenance=prov)


# ---------------------------------------------------------------------------
# desk-scale input family: truncated polynomial algebras
# ---------------------------------------------------------------------------


def truncated_polynomial_algebra(
    names=("t",), order: int = 4, params=() , constraints=()
) -> AlgebraBundle:
    """The commutative algebra of polynomials in the given variables with all
    monomials of total degree >= order cut off. Basis monomials are ordered
    by total degree then lexicographically (first variable outermost). Ships
    with identity structure maps a, b and one partial-derivative map per
    variable (D<name>; plus the alias D for a single variable)."""
    nvars = len(names)
    monomials = []
    for total in range(order):
        degs = [
            e
            for e in itertools.product(range(total + 1), repeat=nvars)
            if sum(e) == total
        ]
        degs.sort(key=lambda e: tuple(-d for d in e[:-1]))
        monomials.extend(degs)
    index = {e: i for i, e in enumerate(monomials)}

    def label(e):
        if sum(e) == 0:
            return "1"
        factors = []
        for name, d in zip(names, e):
            if d == 1:
                factors.append(name)
            elif d > 1:
                factors.append(f"{name}^{d}")
        return "*".join(factors)

    space = BasisSpace([label(e) for e in monomials])
    params = tuple(params)
    one, zero = Scalar.one(params), Scalar.zero(params)
    dim = space.dim
    constants = {}
    for i, ei in enumerate(monomials):
        for j, ej in enumerate(monomials):
            prod = tuple(x + y for x, y in zip(ei, ej))
            k = index.get(prod)
            if k is not None:
                vec = [zero] * dim
                vec[k] = one
                constants[(i, j)] = tuple(vec)
    mul = MultiOp(space, params, 2, constants)
    maps = {
        "a": LinMap.identity(space, params),
        "b": LinMap.identity(space, params),
    }
    for v, name in enumerate(names):
        rows = [[zero] * dim for _ in range(dim)]
        for j, e in enumerate(monomials):
            if e[v] == 0:
                continue
            lower = list(e)
            lower[v] -= 1
            rows[index[tuple(lower)]][j] = Scalar.rational(e[v], params)
        maps[f"D{name}"] = LinMap(space, params, rows)
    if nvars == 1:
        maps["D"] = maps[f"D{names[0]}"]
    ring = Ring(params, constraints)
    prov = {
        "name": f"poly[{','.join(names)}]<{order}",
        "construction": "truncated-polynomial-algebra",
    }
    return AlgebraBundle(space, ring, {"mul": mul}, maps, prov)
