"""Bundle/report file formats and the command-line interface."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import pytest

from bihomcheck.cli import cli_main
from bihomcheck.errors import BundleFormatError
from bihomcheck.fileio import (
    bundle_from_dict,
    load_bundle,
    report_to_json,
    save_bundle,
)


def shipped_catalog_paths():
    folder = resources.files("bihomcheck").joinpath("data/catalog")
    return sorted(p for p in folder.iterdir() if p.name.endswith(".json"))


MINIMAL = {
    "schema": 1,
    "dim": 1,
    "basis": ["e"],
    "ring": {"params": [], "constraints": []},
    "ops": {},
    "maps": {},
}


class TestBundleFormat:
    def test_round_trip_every_shipped_file(self, tmp_path):
        for item in shipped_catalog_paths():
            data = json.loads(item.read_text())
            data.pop("catalog")  # entry metadata is not part of the core schema
            bundle = bundle_from_dict(data)
            out = tmp_path / item.name
            save_bundle(bundle, out)
            again = load_bundle(out)
            assert again.canonical_dict() == bundle.canonical_dict()
            # canonical writes are byte-stable
            save_bundle(again, tmp_path / "again.json")
            assert (tmp_path / "again.json").read_bytes() == out.read_bytes()

    def test_round_trip_constructed_bundles(self, tmp_path, euler_wronskian, entry26):
        for i, bundle in enumerate((euler_wronskian, entry26)):
            path = tmp_path / f"b{i}.json"
            save_bundle(bundle, path)
            again = load_bundle(path)
            assert again.canonical_dict() == bundle.canonical_dict()

    def test_round_trip_fraction_entries(self, tmp_path, entry26):
        """Computed bundles can carry fraction-of-polynomial coefficients;
        they must survive a save/load cycle."""
        inverted = entry26.replace(
            maps={**entry26.maps, "binv": entry26.maps["b"].power(-1)}
        )
        # make the entries genuinely fractional
        from bihomcheck.linear import LinMap
        from bihomcheck.scalars import parse_scalar

        P = entry26.ring.params
        frac = parse_scalar("k1", P) / parse_scalar("k2 + 1", P)
        mixed = LinMap(
            entry26.space, P, [[frac, parse_scalar("0", P)], [parse_scalar("0", P), frac]]
        )
        bundle = inverted.replace(maps={**inverted.maps, "m": mixed})
        path = tmp_path / "frac.json"
        save_bundle(bundle, path)
        assert load_bundle(path).canonical_dict() == bundle.canonical_dict()

    def test_trivial_bundle(self):
        bundle = bundle_from_dict(MINIMAL)
        assert bundle.space.dim == 1 and not bundle.ops and not bundle.maps

    def test_unknown_field_rejected(self):
        bad = dict(MINIMAL, extra=1)
        with pytest.raises(BundleFormatError):
            bundle_from_dict(bad)

    def test_unsupported_schema(self):
        with pytest.raises(BundleFormatError):
            bundle_from_dict(dict(MINIMAL, schema=99))

    def test_index_out_of_range(self):
        bad = dict(
            MINIMAL,
            dim=2,
            basis=["e1", "e2"],
            ops={"mul": {"arity": 2, "entries": [[0, 3, 0, "1"]]}},
        )
        with pytest.raises(BundleFormatError):
            bundle_from_dict(bad)

    def test_unknown_parameter_in_coefficient(self, tmp_path):
        bad = dict(MINIMAL, maps={"a": [["k9"]]})
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        with pytest.raises(BundleFormatError):
            load_bundle(path)

    def test_dim_mismatch(self):
        with pytest.raises(BundleFormatError):
            bundle_from_dict(dict(MINIMAL, dim=2))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(BundleFormatError):
            load_bundle(path)


@pytest.fixture(scope="module")
def entry26_file(tmp_path_factory, entry26):
    path = tmp_path_factory.mktemp("bundles") / "entry26.bundle"
    save_bundle(entry26, path)
    return str(path)


class TestCli:
    def test_check_pass_exit_zero(self, entry26_file, capsys):
        assert cli_main(["check", entry26_file, "--structure", "tbp"]) == 0
        out = capsys.readouterr().out
        assert "overall: PASS" in out

    def test_check_fail_exit_one(self, entry26_file, capsys):
        code = cli_main(
            ["check", entry26_file, "--structure", "bp", "--mode", "sampled",
             "--samples", "1", "--seed", "7"]
        )
        assert code == 1
        out = capsys.readouterr().out
        assert "leibniz" in out and "FAIL" in out

    def test_unknown_structure_exit_two(self, entry26_file, capsys):
        assert cli_main(["check", entry26_file, "--structure", "nope"]) == 2
        assert "unknown structure" in capsys.readouterr().err

    def test_missing_file_exit_two(self, capsys):
        assert cli_main(["check", "/nonexistent.bundle", "--structure", "tbp"]) == 2

    def test_malformed_bundle_exit_two(self, tmp_path, capsys):
        path = tmp_path / "bad.bundle"
        path.write_text("{}")
        assert cli_main(["check", str(path), "--structure", "tbp"]) == 2
        assert "error" in capsys.readouterr().err

    def test_usage_error_exit_two(self, capsys):
        assert cli_main(["check"]) == 2
        capsys.readouterr()

    def test_inapplicable_exit_two(self, tmp_path, capsys):
        from bihomcheck.catalog import get_entry

        path = tmp_path / "e24.bundle"
        save_bundle(get_entry(24).completed_bundle(), path)
        # the fixed power-template identity needs invertible maps
        assert cli_main(["identities", str(path), "--set", "eq3.3"]) == 2
        assert "INAPPLICABLE" in capsys.readouterr().out

    def test_report_files_byte_stable(self, entry26_file, tmp_path, capsys):
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for r in (r1, r2):
            code = cli_main(
                ["check", entry26_file, "--structure", "tbp", "--mode", "sampled",
                 "--samples", "2", "--seed", "5", "--report", str(r)]
            )
            assert code == 0
        capsys.readouterr()
        assert r1.read_bytes() == r2.read_bytes()
        data = json.loads(r1.read_text())
        assert data["seed"] == 5 and data["overall"] == "pass"
        assert "tool_version" in data and "bundle_hash" in data

    def test_identity_suites(self, entry26_file, capsys):
        for name in ("thm25", "eq2.20", "eq3.3", "lemma31"):
            code = cli_main(["identities", entry26_file, "--set", name])
            capsys.readouterr()
            assert code == (1 if name == "eq2.20" else 0)

    def test_lemma31_explicit_exponents(self, entry26_file, capsys):
        code = cli_main(
            ["identities", entry26_file, "--set", "lemma31",
             "--exponents", "0,0,0,0,0,0,0,0", "--exponents=-2,0,-1,-1,-2,0,-1,-1"]
        )
        capsys.readouterr()
        assert code == 0

    def test_construct_and_tensor(self, tmp_path, capsys):
        from bihomcheck.construct import truncated_polynomial_algebra
        from conftest import euler_map

        qt = truncated_polynomial_algebra(("t",), 3)
        src = tmp_path / "qt.bundle"
        save_bundle(qt.replace(maps={**qt.maps, "E": euler_map(qt)}), src)
        out = tmp_path / "wr.bundle"
        code = cli_main(
            ["construct", "derivation-tbp", str(src), "-o", str(out), "--derivation", "E"]
        )
        assert code == 0
        assert cli_main(["check", str(out), "--structure", "tbp"]) == 0
        tens = tmp_path / "tt.bundle"
        assert cli_main(["tensor", str(out), str(out), "--kind", "bp-tbp", "-o", str(tens)]) == 0
        assert cli_main(["check", str(tens), "--structure", "tbp"]) == 0
        capsys.readouterr()

    def test_construct_strict_refusal(self, tmp_path, capsys):
        from bihomcheck.construct import truncated_polynomial_algebra

        qt = truncated_polynomial_algebra(("t",), 4)
        src = tmp_path / "qt4.bundle"
        save_bundle(qt, src)
        out = tmp_path / "w.bundle"
        assert cli_main(["construct", "derivation-tbp", str(src), "-o", str(out)]) == 2
        err = capsys.readouterr().err
        assert "derivation" in err
        code = cli_main(
            ["construct", "derivation-tbp", str(src), "-o", str(out),
             "--allow-hypothesis-failures"]
        )
        assert code == 0 and out.exists()
        capsys.readouterr()

    def test_twist_via_cli(self, entry26_file, tmp_path, capsys):
        out = tmp_path / "tw.bundle"
        code = cli_main(
            ["construct", "twist", entry26_file, "-o", str(out),
             "--op", "mul=a,b", "--op", "br=a,b"]
        )
        assert code == 0
        capsys.readouterr()

    def test_catalog_subcommands(self, capsys, tmp_path):
        assert cli_main(["catalog", "list"]) == 0
        out = capsys.readouterr().out
        assert out.count("\n") >= 27
        assert cli_main(["catalog", "show", "26"]) == 0
        shown = json.loads(capsys.readouterr().out)
        assert shown["catalog"]["id"] == 26
        assert cli_main(["catalog", "verify", "--entries", "24-26"]) == 0
        table = capsys.readouterr().out
        assert len([l for l in table.splitlines() if l.strip()]) == 5  # header+rule+3
        report = tmp_path / "cat.json"
        assert cli_main(["catalog", "verify", "--entries", "1,26", "--report", str(report)]) == 0
        capsys.readouterr()
        data = json.loads(report.read_text())
        assert len(data["reports"]) == 2

    def test_full_catalog_verify_byte_stable(self, tmp_path, capsys):
        r1, r2 = tmp_path / "c1.json", tmp_path / "c2.json"
        for r in (r1, r2):
            assert cli_main(["catalog", "verify", "--report", str(r), "--seed", "3"]) == 0
            capsys.readouterr()
        assert r1.read_bytes() == r2.read_bytes()

    def test_dsl_check(self, entry26_file, tmp_path, capsys):
        idl = tmp_path / "laws.idl"
        idl.write_text(
            "# id: my-law\nforall x,y: br(b(x), a(y)) + br(b(y), a(x)) = 0\n"
        )
        assert cli_main(["dsl", "check", str(idl), entry26_file]) == 0
        out = capsys.readouterr().out
        assert "my-law" in out

    def test_dsl_check_syntax_error(self, entry26_file, tmp_path, capsys):
        idl = tmp_path / "bad.idl"
        idl.write_text("forall x: mul(x, x) = 0\n")
        assert cli_main(["dsl", "check", str(idl), entry26_file]) == 2
        assert "error" in capsys.readouterr().err

    def test_report_to_json_sorted(self, entry26):
        from bihomcheck.structures import check_structure

        text = report_to_json(check_structure("tbp", entry26))
        data = json.loads(text)
        ids = [v["identity"] for v in data["verdicts"]]
        assert ids == sorted(ids)
