"""The algebra bundle: one basis space plus named multilinear operations and
named linear maps over a shared coefficient ring.

Conventional names (enforced arities): binary ops mul, br, star; ternary tbr;
nbr with its declared arity. Conventional maps: a, b (the two structure
endomorphisms), D (a derivation), f (an involution); extra maps are allowed
under any name.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Mapping

from .errors import ArityMismatch, MissingMap, MissingOp, RingMismatch, SpaceMismatch
from .linear import BasisSpace, LinMap, MultiOp
from .scalars import Poly

CONVENTIONAL_ARITIES = {"mul": 2, "br": 2, "star": 2, "tbr": 3}


class Ring:
    """Parameter names plus the constraint polynomials that cut the valid
    region of parameter space (empty for unconstrained bundles)."""

    __slots__ = ("params", "constraints")

    def __init__(self, params=(), constraints=()):
        self.params = tuple(params)
        self.constraints = tuple(constraints)
        for c in self.constraints:
            if not isinstance(c, Poly) or c.params != self.params:
                raise RingMismatch("constraint over a different parameter list")

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.params == other.params
            and len(self.constraints) == len(other.constraints)
            and all(a == b for a, b in zip(self.constraints, other.constraints))
        )

    __hash__ = None

    def check_point(self, point: Mapping[str, Fraction]):
        """Return the first constraint that does not vanish at point, or None."""
        for c in self.constraints:
            if c.eval(point) != 0:
                return c
        return None

    def __repr__(self):
        return f"Ring(params={self.params!r}, constraints={len(self.constraints)})"


class AlgebraBundle:
    __slots__ = ("space", "ring", "ops", "maps", "provenance")

    def __init__(self, space: BasisSpace, ring: Ring, ops: dict, maps: dict, provenance=None):
        self.space = space
        self.ring = ring
        self.ops = dict(ops)
        self.maps = dict(maps)
        self.provenance = dict(provenance) if provenance else None
        for name, op in self.ops.items():
            if op.space != space:
                raise SpaceMismatch(f"op {name!r} lives on a different space")
            if op.params != ring.params:
                raise RingMismatch(f"op {name!r} over a different ring")
            want = CONVENTIONAL_ARITIES.get(name)
            if want is not None and op.arity != want:
                raise ArityMismatch(f"op {name!r} must have arity {want}")
        for name, m in self.maps.items():
            if m.space != space:
                raise SpaceMismatch(f"map {name!r} lives on a different space")
            if m.params != ring.params:
                raise RingMismatch(f"map {name!r} over a different ring")

    # -- access --------------------------------------------------------------

    def require_op(self, name: str, arity: int | None = None) -> MultiOp:
        op = self.ops.get(name)
        if op is None:
            raise MissingOp(name)
        if arity is not None and op.arity != arity:
            raise ArityMismatch(f"op {name!r} has arity {op.arity}, need {arity}")
        return op

    def require_map(self, name: str) -> LinMap:
        m = self.maps.get(name)
        if m is None:
            raise MissingMap(name)
        return m

    def map_or_identity(self, name: str) -> LinMap:
        m = self.maps.get(name)
        if m is None:
            return LinMap.identity(self.space, self.ring.params)
        return m

    # -- transformations -------------------------------------------------------

    def replace(self, ops=None, maps=None, provenance=None) -> "AlgebraBundle":
        return AlgebraBundle(
            self.space,
            self.ring,
            ops if ops is not None else self.ops,
            maps if maps is not None else self.maps,
            provenance if provenance is not None else self.provenance,
        )

    def eval_at(self, point: Mapping[str, Fraction]) -> "AlgebraBundle":
        """Specialize every coefficient at a parameter point (exact)."""
        point = {k: Fraction(v) for k, v in point.items()}
        ops = {n: op.eval_at(point) for n, op in self.ops.items()}
        maps = {n: m.eval_at(point) for n, m in self.maps.items()}
        prov = dict(self.provenance) if self.provenance else {}
        prov["specialized_at"] = {k: str(v) for k, v in point.items()}
        return AlgebraBundle(self.space, Ring(), ops, maps, prov)

    def rename_params(self, mapping: Mapping[str, str]) -> "AlgebraBundle":
        new_params = tuple(mapping.get(p, p) for p in self.ring.params)
        if len(set(new_params)) != len(new_params):
            raise RingMismatch("renaming collapses parameters")
        ops = {n: op.rename_params(mapping, new_params) for n, op in self.ops.items()}
        maps = {n: m.rename_params(mapping, new_params) for n, m in self.maps.items()}
        constraints = tuple(c.rename(mapping, new_params) for c in self.ring.constraints)
        return AlgebraBundle(self.space, Ring(new_params, constraints), ops, maps, self.provenance)

    def substitute_params(self, values: Mapping[str, "object"], new_params) -> "AlgebraBundle":
        """Replace some parameters by Scalars over the reduced ring; constraint
        polynomials that become identically zero are dropped, anything left is
        a residual the caller must deal with."""
        new_params = tuple(new_params)
        ops = {}
        for n, op in self.ops.items():
            constants = {
                idx: tuple(c.substitute(values, new_params) for c in vec)
                for idx, vec in op.constants.items()
            }
            ops[n] = MultiOp(op.space, new_params, op.arity, constants)
        maps = {
            n: LinMap(
                m.space,
                new_params,
                [[c.substitute(values, new_params) for c in row] for row in m.rows],
            )
            for n, m in self.maps.items()
        }
        residuals = []
        for c in self.ring.constraints:
            value = Poly(c.params, dict(c.terms)).substitute(values, new_params)
            if not value.is_zero():
                num = value.as_fraction_pair()[0]
                residuals.append(num)
        return AlgebraBundle(self.space, Ring(new_params, tuple(residuals)), ops, maps, self.provenance)

    def with_params(self, new_params) -> "AlgebraBundle":
        """Reinterpret over a superset parameter tuple (ring extension)."""
        new_params = tuple(new_params)
        for p in self.ring.params:
            if p not in new_params:
                raise RingMismatch(f"parameter {p!r} missing from the extended ring")
        ops = {n: op.rename_params({}, new_params) for n, op in self.ops.items()}
        maps = {n: m.rename_params({}, new_params) for n, m in self.maps.items()}
        constraints = tuple(c.rename({}, new_params) for c in self.ring.constraints)
        return AlgebraBundle(self.space, Ring(new_params, constraints), ops, maps, self.provenance)

    # -- canonical form ---------------------------------------------------------

    def canonical_dict(self) -> dict:
        ops = {}
        for name in sorted(self.ops):
            op = self.ops[name]
            entries = []
            for idx in sorted(op.constants):
                vec = op.constants[idx]
                for k, c in enumerate(vec):
                    if not c.is_zero():
                        entries.append(list(idx) + [k, c.text()])
            ops[name] = {"arity": op.arity, "entries": entries}
        maps = {
            name: [[c.text() for c in row] for row in self.maps[name].rows]
            for name in sorted(self.maps)
        }
        out = {
            "schema": 1,
            "dim": self.space.dim,
            "basis": list(self.space.labels),
            "ring": {
                "params": list(self.ring.params),
                "constraints": [c.text() for c in self.ring.constraints],
            },
            "ops": ops,
            "maps": maps,
        }
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    def content_hash(self) -> str:
        data = self.canonical_dict()
        data.pop("provenance", None)
        blob = json.dumps(data, sort_keys=True, ensure_ascii=False).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:16]

    def label(self) -> str:
        if self.provenance and "name" in self.provenance:
            return str(self.provenance["name"])
        return self.content_hash()

    def __repr__(self):
        return (
            f"AlgebraBundle(dim={self.space.dim}, ops={sorted(self.ops)}, "
            f"maps={sorted(self.maps)}, params={self.ring.params})"
        )
