"""Shared fixtures: small hand-built bundles used across the suite."""

from __future__ import annotations

import pytest

from bihomcheck.bundle import AlgebraBundle, Ring
from bihomcheck.linear import BasisSpace, LinMap, MultiOp
from bihomcheck.scalars import Scalar, parse_scalar


def make_bundle(labels, params, ops, maps, constraints=(), name=None):
    """Build a bundle from coefficient strings.

    ops:  {name: (arity, {tuple: (coeff, ...)})}
    maps: {name: rows of coeff strings}  (row i, column j)
    """
    params = tuple(params)
    space = BasisSpace(labels)
    S = lambda text: parse_scalar(str(text), params)
    ring = Ring(
        params,
        tuple(parse_scalar(c, params).as_fraction_pair()[0] for c in constraints),
    )
    built_ops = {}
    for op_name, (arity, entries) in ops.items():
        constants = {
            tuple(idx): tuple(S(c) for c in vec) for idx, vec in entries.items()
        }
        built_ops[op_name] = MultiOp(space, params, arity, constants)
    built_maps = {
        name: LinMap(space, params, [[S(c) for c in row] for row in rows])
        for name, rows in maps.items()
    }
    prov = {"name": name} if name else None
    return AlgebraBundle(space, ring, built_ops, built_maps, prov)


@pytest.fixture(scope="session")
def entry26():
    """The catalog's mixed example with its skew-derived bracket completion."""
    from bihomcheck.catalog import get_entry

    return get_entry(26).completed_bundle()


@pytest.fixture(scope="session")
def entry26_zero_forced():
    """Same constants but with the unlisted bracket slots forced to zero."""
    from bihomcheck.catalog import get_entry

    return get_entry(26).bundle


@pytest.fixture(scope="session")
def zero_bundle():
    """Zero product and bracket with identity structure maps."""
    return make_bundle(
        ["e1", "e2"],
        (),
        {"mul": (2, {}), "br": (2, {})},
        {"a": [["1", "0"], ["0", "1"]], "b": [["1", "0"], ["0", "1"]]},
        name="zero",
    )


def euler_map(bundle, var_index=1):
    """(multiply by the degree-1 basis monomial at var_index) ∘ (the matching
    partial derivative): an ideal-stable derivation of a truncated
    polynomial algebra."""
    mul = bundle.ops["mul"]
    cols = [mul.value_at((var_index, j)).coords for j in range(bundle.space.dim)]
    mult = LinMap.from_columns(bundle.space, bundle.ring.params, cols)
    label = bundle.space.labels[var_index]
    d_name = f"D{label}" if f"D{label}" in bundle.maps else "D"
    return mult.compose(bundle.maps[d_name])


@pytest.fixture(scope="session")
def euler_wronskian():
    """Honest transposed bundle: truncated power series with the bracket from
    the ideal-stable derivation t*d/dt (identity structure maps)."""
    from bihomcheck.construct import derivation_tbp, truncated_polynomial_algebra

    qt = truncated_polynomial_algebra(("t",), 4)
    e = euler_map(qt, 1)
    return derivation_tbp(qt.replace(maps={**qt.maps, "E": e}), d_name="E")
