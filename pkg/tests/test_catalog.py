"""Catalog: entry data, skew completions, per-axiom verification reports."""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

import pytest

from bihomcheck.catalog import (
    AXIS_IDS,
    complete_by_skew,
    entries,
    get_entry,
    sample_points,
    solve_skew_completion,
    summary_table,
    verify_all,
    verify_entry,
)
from bihomcheck.errors import Inconsistent, UnknownEntry
from bihomcheck.linear import Vector
from bihomcheck.rng import SplitRng
from bihomcheck.structures import check_consequence_suite


def test_all_entries_present():
    assert sorted(entries()) == list(range(1, 27))
    for entry in entries().values():
        assert entry.case in {"I", "II", "III"}
        assert entry.bundle.space.dim == 2


def test_unknown_entry():
    with pytest.raises(UnknownEntry):
        get_entry(27)


def test_case_assignment():
    # bracket trivial up to entry 20, product trivial for 21..25
    for i in range(1, 21):
        assert get_entry(i).case == "I"
        assert not get_entry(i).bundle.ops["br"].constants
    for i in range(21, 26):
        assert get_entry(i).case == "II"
        assert not get_entry(i).bundle.ops["mul"].constants
    assert get_entry(26).case == "III"


class TestCompletion:
    def test_entry26_completion_values(self):
        e = get_entry(26)
        comp = {k: tuple(c.text() for c in v) for k, v in e.completion.items()}
        # all-zero slots stay implicit, so only the (e2, e1) slot is stored
        assert comp == {(1, 0): ("0", "-1")}
        br = e.completed_bundle().ops["br"]
        assert br.value_at((1, 1)).is_zero()

    def test_entry24_all_zero(self):
        e = get_entry(24)
        assert e.completion == {}  # solved: every unknown slot is zero
        br = e.completed_bundle().ops["br"]
        for slot in ((0, 1), (1, 0), (1, 1)):
            assert br.value_at(slot).is_zero()

    def test_fully_listed_bracket_unchanged(self):
        e = get_entry(3)  # trivial bracket: every slot is listed (as zero)
        assert e.completion == {}
        assert e.completed_bundle().ops["br"] == e.bundle.ops["br"]

    def test_numeric_completion_at_points(self):
        e = get_entry(26)
        sol = complete_by_skew(
            e.bundle.ops["br"].constants,
            e.given_br_slots,
            e.bundle.maps["a"],
            e.bundle.maps["b"],
            {"k1": 3, "k2": 5},
        )
        assert {k: tuple(c.text() for c in v) for k, v in sol.items()} == {
            (1, 0): ("0", "-1"),
            (1, 1): ("0", "0"),
        }

    def test_stored_completions_rederived_at_random_points(self):
        """Every shipped completion agrees with a fresh numeric solve at five
        distinct constraint-satisfying points (so the stored data really is
        parameter-independent)."""
        unknown_dims = 0
        for entry_id, entry in entries().items():
            if entry.completion is None:
                continue  # entry 21: unsolvable, checked separately
            unknown = [
                (i, j)
                for i in range(2)
                for j in range(2)
                if (i, j) not in entry.given_br_slots
            ]
            if not unknown:
                continue
            unknown_dims += 1
            points = sample_points(entry, 5, seed=100 + entry_id)
            for point in points:
                sol = complete_by_skew(
                    entry.bundle.ops["br"].constants,
                    entry.given_br_slots,
                    entry.bundle.maps["a"],
                    entry.bundle.maps["b"],
                    point,
                )
                for slot in unknown:
                    stored = entry.completion.get(slot)
                    want = (
                        tuple(c.eval(point) for c in stored)
                        if stored is not None
                        else (Fraction(0), Fraction(0))
                    )
                    got = tuple(c.eval({}) for c in sol[slot])
                    assert got == want, (entry_id, slot, point)
        assert unknown_dims == 5  # entries 22..26 have open bracket slots

    def test_completion_satisfies_skew_exactly(self):
        """The completed bracket satisfies the twisted skew equations at the
        solved point, for every basis pair."""
        for entry_id in (22, 23, 24, 25, 26):
            entry = get_entry(entry_id)
            point = sample_points(entry, 1, seed=7 + entry_id)[0]
            bundle = entry.completed_bundle().eval_at(point)
            br, a, b = bundle.ops["br"], bundle.maps["a"], bundle.maps["b"]
            for i in range(2):
                for j in range(2):
                    lhs = br.apply([b.column(i), a.column(j)])
                    rhs = br.apply([b.column(j), a.column(i)])
                    assert (lhs + rhs).is_zero(), (entry_id, i, j)

    def test_unsolvable_completion_raises(self):
        """The slot the listing leaves open in entry 21 admits no skew
        completion at generic constraint points."""
        entry = get_entry(21)
        assert entry.completion is None
        point = sample_points(entry, 1, seed=3)[0]
        with pytest.raises(Inconsistent):
            complete_by_skew(
                entry.bundle.ops["br"].constants,
                entry.given_br_slots,
                entry.bundle.maps["a"],
                entry.bundle.maps["b"],
                point,
            )

    def test_symbolic_solver_matches_stored(self):
        e = get_entry(26)
        sol = solve_skew_completion(
            e.bundle.ops["br"].constants,
            e.given_br_slots,
            e.bundle.maps["a"],
            e.bundle.maps["b"],
        )
        assert {k: tuple(c.text() for c in v) for k, v in sol.items()} == {
            (1, 0): ("0", "-1"),
            (1, 1): ("0", "0"),
        }


class TestVerification:
    def test_entry26_symbolic_pass(self):
        report = verify_entry(26, "symbolic")
        assert report.passed
        assert {v.identity for v in report.verdicts} == set(AXIS_IDS)

    def test_entries_24_25_pass(self):
        assert verify_entry(24, "symbolic").passed
        assert verify_entry(25, "symbolic").passed

    def test_entry1_commute_discrepancy(self):
        report = verify_entry(1, "symbolic")
        v = report.verdict("commute(a,b)")
        assert v.status == "fail"
        assert v.counterexample.basis_tuple == (0,)
        assert list(v.counterexample.residual) == ["0", "k1 - k2"]
        assert get_entry(1).status == "report-only"

    def test_entry6_needs_unprinted_constraint(self):
        report = verify_entry(6, "symbolic")
        assert report.verdict("assoc").status == "fail"
        assert get_entry(6).status == "report-only"

    def test_asserted_pass_entries_pass(self):
        for entry_id, entry in entries().items():
            if entry.status == "asserted-pass":
                assert verify_entry(entry_id, "symbolic").passed, entry_id

    def test_asserted_pass_superset(self):
        asserted = {i for i, e in entries().items() if e.status == "asserted-pass"}
        assert asserted >= {24, 25, 26}

    def test_sampled_agrees_with_symbolic_for_unconstrained(self):
        for entry_id in (1, 5, 24, 26):
            sym = verify_entry(entry_id, "symbolic")
            samp = verify_entry(entry_id, "sampled", samples=3, seed=11)
            sym_status = {v.identity: v.status for v in sym.verdicts}
            samp_status = {v.identity: v.status for v in samp.verdicts}
            # a symbolic pass forces a pass at every point; symbolic failures
            # can evade detection at unlucky points but not in these entries
            assert sym_status == samp_status, entry_id

    def test_branch_verification_notes(self):
        report = verify_entry(16, "symbolic")
        assert any("branches" in n for n in report.notes)

    def test_constrained_sampling_exact(self):
        for entry_id in (16, 17, 20, 21, 22, 23):
            entry = get_entry(entry_id)
            for point in sample_points(entry, 4, seed=5):
                assert entry.bundle.ring.check_point(point) is None


class TestAggregate:
    def test_verify_all_shape_and_stability(self):
        reports = verify_all("symbolic")
        assert len(reports) == 26
        table = summary_table(reports)
        assert len(table.splitlines()) == 28  # header + rule + 26 rows
        again = verify_all("symbolic")
        first = json.dumps([r.to_dict() for r in reports], sort_keys=True)
        second = json.dumps([r.to_dict() for r in again], sort_keys=True)
        assert first == second

    def test_zero_point_specialization_stable(self):
        """Specializing every parameter to 0 reduces all axes to checks over
        plain rationals; the resulting report is identical across runs."""
        from bihomcheck.catalog import _axis_verdicts

        outputs = []
        for _ in range(2):
            rows = {}
            for entry_id, entry in entries().items():
                bundle = entry.completed_bundle()
                point = {p: Fraction(0) for p in bundle.ring.params}
                verdicts = _axis_verdicts(bundle.eval_at(point))
                rows[entry_id] = [v.to_dict() for v in verdicts]
            outputs.append(json.dumps(rows, sort_keys=True))
        assert outputs[0] == outputs[1]

    def test_asserted_pass_entries_satisfy_consequences(self):
        """Every asserted-pass entry also passes the cyclic consequence suite
        (including the strongness law)."""
        for entry_id, entry in entries().items():
            if entry.status != "asserted-pass":
                continue
            report = check_consequence_suite(entry.completed_bundle())
            assert report.passed, entry_id


def test_split_rng_is_deterministic_and_splittable():
    a = SplitRng(42).child("x")
    b = SplitRng(42).child("x")
    assert [a.randint(0, 100) for _ in range(5)] == [b.randint(0, 100) for _ in range(5)]
    c = SplitRng(42).child("y")
    assert [c.randint(0, 100) for _ in range(5)] != [b.randint(0, 100) for _ in range(5)]
