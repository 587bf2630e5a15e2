"""Identity engine: exhaustive basis checking, counterexamples, sampled mode,
and the exponent-template family."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from bihomcheck.dsl import MapApply, OpApply, Var, parse_identity, print_identity
from bihomcheck.engine import (
    BoundIdentity,
    ExponentTuple,
    FIXED_EXPONENTS,
    check_identity,
    check_identity_sampled,
    instantiate_power_identity,
)
from bihomcheck.errors import ArityMismatch, ConstraintViolated, UnknownName
from bihomcheck.linear import Vector
from bihomcheck.scalars import Scalar
from bihomcheck.structures import IDENTITIES

from conftest import make_bundle


def test_skew_passes_on_completed_bundle(entry26):
    assert check_identity(IDENTITIES["skew"], entry26, "skew").passed


def test_skew_fails_with_zero_forced_completion(entry26_zero_forced):
    v = check_identity(IDENTITIES["skew"], entry26_zero_forced, "skew")
    assert v.status == "fail"
    assert v.counterexample.basis_tuple == (0, 0)
    assert list(v.counterexample.residual) == ["0", "2*k1"]


def test_zero_bundle_satisfies_everything(zero_bundle):
    for identity_id in ("comm", "assoc", "skew", "jacobi", "leibniz", "tcompat"):
        assert check_identity(IDENTITIES[identity_id], zero_bundle, identity_id).passed


def test_unknown_name():
    bundle = make_bundle(["e"], (), {"mul": (2, {})}, {})
    with pytest.raises(UnknownName):
        check_identity(parse_identity("forall x,y: br(x, y) = 0"), bundle)
    with pytest.raises(UnknownName):
        check_identity(parse_identity("forall x: a(x) = 0"), bundle)


def test_arity_mismatch():
    bundle = make_bundle(["e"], (), {"mul": (2, {})}, {})
    with pytest.raises(ArityMismatch):
        check_identity(parse_identity("forall x,y,z: mul(x, y, z) = 0"), bundle)


def test_sampled_leibniz_counterexample(entry26):
    v = check_identity_sampled(
        IDENTITIES["leibniz"], entry26, [{"k1": 3, "k2": 5}], "leibniz"
    )
    assert v.status == "fail"
    assert v.counterexample.basis_tuple == (0, 0, 0)
    assert list(v.counterexample.residual) == ["0", "1"]
    assert v.counterexample.point == {"k1": Fraction(3), "k2": Fraction(5)}


def test_sampled_point_must_satisfy_constraints():
    bundle = make_bundle(
        ["e1", "e2"],
        ("k1", "k2"),
        {"mul": (2, {})},
        {"a": [["1", "0"], ["0", "1"]], "b": [["1", "0"], ["0", "1"]]},
        constraints=["(k1 - 1)*k2"],
    )
    with pytest.raises(ConstraintViolated):
        check_identity_sampled(IDENTITIES["comm"], bundle, [{"k1": 2, "k2": 3}])
    # a point on the constraint variety is fine
    v = check_identity_sampled(IDENTITIES["comm"], bundle, [{"k1": 1, "k2": 3}])
    assert v.passed


def test_basis_sufficiency(entry26):
    """An identity passing the exhaustive basis check vanishes on random full
    vectors too (this is exactly what linearity buys)."""
    rng = random.Random(99)
    for identity_id in ("skew", "jacobi", "tcompat", "comm"):
        bound = BoundIdentity(IDENTITIES[identity_id], entry26)
        assert check_identity(IDENTITIES[identity_id], entry26).passed
        for _ in range(25):
            assignment = {
                name: Vector(
                    entry26.space,
                    entry26.ring.params,
                    [Scalar.rational(rng.randint(-5, 5), entry26.ring.params) for _ in range(2)],
                )
                for name in IDENTITIES[identity_id].vars
            }
            assert bound.eval_at(assignment).is_zero()


def test_counterexample_is_lex_minimal(entry26_zero_forced):
    ident = IDENTITIES["skew"]
    verdict = check_identity(ident, entry26_zero_forced)
    bound = BoundIdentity(ident, entry26_zero_forced)
    basis = [Vector.basis(entry26_zero_forced.space, i, entry26_zero_forced.ring.params) for i in range(2)]
    failures = []
    for tup in itertools.product(range(2), repeat=2):
        value = bound.eval_at({n: basis[i] for n, i in zip(ident.vars, tup)})
        if not value.is_zero():
            failures.append(tup)
    assert failures and min(failures) == verdict.counterexample.basis_tuple


def test_cyc_of_cyc_is_three_times(entry26):
    """A cyclic sum of an already cyclically-summed body is 3x the single sum,
    so the difference is identically zero."""
    body = "mul(a(b^2(x)), br(a(b(y)), a^2(z)))"
    text = (
        f"forall x,y,z: cyc(x,y,z){{ cyc(x,y,z){{ {body} }} }}"
        f" - 3*cyc(x,y,z){{ {body} }} = 0"
    )
    assert check_identity(parse_identity(text), entry26).passed


class TestPowerTemplates:
    def test_zero_exponents_shape(self):
        ident = instantiate_power_identity("eq31")
        # the first argument of the first bracket term drops its zero alpha
        # power entirely: plain b^2(y)
        first = ident.terms[0][1]
        assert first.children[0].children[0] == MapApply("b", 2, Var("y"))

    def test_fixed_instance_matches_template(self):
        assert instantiate_power_identity("eq32", FIXED_EXPONENTS) == instantiate_power_identity("eq33")

    def test_fixed_instance_matches_handwritten_text(self):
        assert instantiate_power_identity("eq33") == IDENTITIES["power-fixed"]

    def test_first_template_passes_on_entry26(self, entry26):
        for exps in (ExponentTuple(), FIXED_EXPONENTS, ExponentTuple(1, -1, 2, 0, -2, 1, 0, 1)):
            for which in ("eq31", "eq32"):
                v = check_identity(instantiate_power_identity(which, exps), entry26)
                assert v.passed, (which, exps)

    def test_inapplicable_on_singular_maps(self):
        from bihomcheck.catalog import get_entry

        e24 = get_entry(24).completed_bundle()  # its second structure map is singular
        v = check_identity(instantiate_power_identity("eq33"), e24, "power-fixed")
        assert v.status == "inapplicable"
        assert "invertible" in v.reason or "determinant" in v.reason

    def test_unknown_template(self):
        with pytest.raises(ValueError):
            instantiate_power_identity("eq99")


def test_verdict_serialization(entry26_zero_forced):
    v = check_identity(IDENTITIES["skew"], entry26_zero_forced, "skew")
    data = v.to_dict()
    assert data["status"] == "fail"
    assert data["counterexample"]["basis_tuple"] == [0, 0]
