"""Independent brute-force oracles, deliberately sharing no code with the
library's evaluator: plain Fractions, plain nested loops."""

from __future__ import annotations

import itertools
from fractions import Fraction


def naive_apply(constants, arity, dim, args):
    """Multilinear extension computed over the FULL index space.

    constants: {tuple: [Fraction]*dim}; args: list of coordinate lists."""
    out = [Fraction(0)] * dim
    for idx in itertools.product(range(dim), repeat=arity):
        coeff = Fraction(1)
        for slot, i in enumerate(idx):
            coeff *= args[slot][i]
        vec = constants.get(idx)
        if vec is None or coeff == 0:
            continue
        for k in range(dim):
            out[k] += coeff * vec[k]
    return out


def _bil(constants, dim, x, y):
    return naive_apply(constants, 2, dim, [x, y])


def _basis(dim, i):
    v = [Fraction(0)] * dim
    v[i] = Fraction(1)
    return v


def _add(u, v):
    return [a + b for a, b in zip(u, v)]


def _scale(c, u):
    return [c * x for x in u]


def classical_transposed_poisson(dim, mul_c, br_c):
    """Check the untwisted axioms (both structure maps the identity) by
    exhaustive basis loops: commutativity, associativity, antisymmetry,
    the Jacobi law, and the factor-2 transposed compatibility.

    Returns {law: bool}."""
    basis = [_basis(dim, i) for i in range(dim)]
    out = {}

    out["comm"] = all(
        _bil(mul_c, dim, basis[i], basis[j]) == _bil(mul_c, dim, basis[j], basis[i])
        for i in range(dim)
        for j in range(dim)
    )

    ok = True
    for i, j, k in itertools.product(range(dim), repeat=3):
        lhs = _bil(mul_c, dim, _bil(mul_c, dim, basis[i], basis[j]), basis[k])
        rhs = _bil(mul_c, dim, basis[i], _bil(mul_c, dim, basis[j], basis[k]))
        ok = ok and lhs == rhs
    out["assoc"] = ok

    out["skew"] = all(
        _bil(br_c, dim, basis[i], basis[j])
        == _scale(Fraction(-1), _bil(br_c, dim, basis[j], basis[i]))
        for i in range(dim)
        for j in range(dim)
    )

    ok = True
    for i, j, k in itertools.product(range(dim), repeat=3):
        total = [Fraction(0)] * dim
        for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
            total = _add(total, _bil(br_c, dim, _bil(br_c, dim, basis[x], basis[y]), basis[z]))
        ok = ok and all(c == 0 for c in total)
    out["jacobi"] = ok

    ok = True
    for i, j, k in itertools.product(range(dim), repeat=3):
        lhs = _scale(Fraction(2), _bil(mul_c, dim, basis[i], _bil(br_c, dim, basis[j], basis[k])))
        rhs = _add(
            _bil(br_c, dim, _bil(mul_c, dim, basis[i], basis[j]), basis[k]),
            _bil(br_c, dim, basis[j], _bil(mul_c, dim, basis[i], basis[k])),
        )
        ok = ok and lhs == rhs
    out["tcompat"] = ok

    out["all"] = all(out.values())
    return out


def rational_constants(op):
    """A MultiOp's constants as plain Fractions (op must be over Q)."""
    return {
        idx: [c.eval({}) for c in vec] for idx, vec in op.constants.items()
    }
